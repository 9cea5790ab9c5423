use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense complex matrix stored in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::from_vec(
            rows,
            cols,
            data.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ComplexMatrix { rows, cols, data }
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    /// The projector `|v><v|`.
    pub fn outer(v: &[Complex64]) -> Self {
        Self::from_fn(v.len(), v.len(), |i, j| v[i] * v[j].conj())
    }

    /// A single column holding `v`.
    pub fn column(v: &[Complex64]) -> Self {
        ComplexMatrix {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn col(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub(crate) fn ensure_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.data.len(),
                found: other.data.len(),
            });
        }
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |M[i][j] - conj(M[j][i])|`; infinite for non-square input.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut dev = 0.0f64;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// Hermitian within `tol`, scaled by the largest entry when that exceeds one.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol * self.max_abs().max(1.0)
    }

    /// `max |a - b|` over entries; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    /// Panics on incompatible shapes; use [`ComplexMatrix::matmul`] for a checked product.
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("incompatible matrix shapes")
    }
}

/// Per-factor dimensions of a tensor-product space. Factor 0 is the most
/// significant digit of a basis index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DimList(Vec<usize>);

impl DimList {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidSubsystem("empty dimension list".into()));
        }
        if let Some(&d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidSubsystem(format!("factor dimension {d} < 2")));
        }
        Ok(DimList(dims))
    }

    pub fn qubits(n: usize) -> Result<Self> {
        Self::new(vec![2; n])
    }

    pub fn dims(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    /// Stride of factor `k` in basis-index arithmetic.
    pub fn stride(&self, k: usize) -> usize {
        self.0[k + 1..].iter().product()
    }

    pub fn sub(&self, factors: &[usize]) -> Result<Self> {
        Self::new(factors.iter().map(|&k| self.0[k]).collect())
    }

    /// Sorted copy of `keep` after checking range and uniqueness.
    pub(crate) fn checked_subset(&self, keep: &[usize]) -> Result<Vec<usize>> {
        if keep.is_empty() {
            return Err(Error::InvalidSubsystem("empty subsystem set".into()));
        }
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSubsystem(format!(
                "duplicate factor in {keep:?}"
            )));
        }
        if let Some(&k) = sorted.iter().find(|&&k| k >= self.len()) {
            return Err(Error::InvalidSubsystem(format!(
                "factor {k} out of range for {} factors",
                self.len()
            )));
        }
        Ok(sorted)
    }

    /// Splits every basis index into a (kept, traced) pair of sub-indices.
    /// Returns `table` with `table[t * dim_keep + k]` = the full index.
    pub(crate) fn split_table(&self, keep_sorted: &[usize]) -> (usize, usize, Vec<usize>) {
        let n = self.len();
        let traced: Vec<usize> = (0..n).filter(|k| !keep_sorted.contains(k)).collect();
        let dim_keep: usize = keep_sorted.iter().map(|&k| self.0[k]).product();
        let dim_traced: usize = traced.iter().map(|&k| self.0[k]).product();
        let mut table = vec![0usize; self.total()];
        let mut digits = vec![0usize; n];
        for full in 0..self.total() {
            let mut rem = full;
            for k in (0..n).rev() {
                digits[k] = rem % self.0[k];
                rem /= self.0[k];
            }
            let kept = keep_sorted
                .iter()
                .fold(0, |acc, &k| acc * self.0[k] + digits[k]);
            let tr = traced.iter().fold(0, |acc, &k| acc * self.0[k] + digits[k]);
            table[tr * dim_keep + kept] = full;
        }
        (dim_keep, dim_traced, table)
    }
}

/// Kronecker product; `kron(a, b)[(i*rb + k, j*cb + l)] = a[(i, j)] * b[(k, l)]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (rb, cb) = (b.rows, b.cols);
    ComplexMatrix::from_fn(a.rows * rb, a.cols * cb, |r, c| {
        a[(r / rb, c / cb)] * b[(r % rb, c % cb)]
    })
}

fn check_square_dims(rho: &ComplexMatrix, dims: &DimList) -> Result<usize> {
    let n = rho.ensure_square()?;
    if n != dims.total() {
        return Err(Error::DimensionMismatch {
            expected: dims.total(),
            found: n,
        });
    }
    Ok(n)
}

/// Reduced matrix on the factors in `keep`, in ascending factor order.
pub fn partial_trace(rho: &ComplexMatrix, dims: &DimList, keep: &[usize]) -> Result<ComplexMatrix> {
    check_square_dims(rho, dims)?;
    let keep = dims.checked_subset(keep)?;
    let (dk, dt, table) = dims.split_table(&keep);
    let mut out = ComplexMatrix::zeros(dk, dk);
    for t in 0..dt {
        let idx = &table[t * dk..(t + 1) * dk];
        for (k1, &r) in idx.iter().enumerate() {
            for (k2, &c) in idx.iter().enumerate() {
                out[(k1, k2)] += rho[(r, c)];
            }
        }
    }
    Ok(out)
}

/// Transposes the indices of one tensor factor.
pub fn partial_transpose(
    rho: &ComplexMatrix,
    dims: &DimList,
    subsystem: usize,
) -> Result<ComplexMatrix> {
    check_square_dims(rho, dims)?;
    if subsystem >= dims.len() {
        return Err(Error::InvalidSubsystem(format!(
            "factor {subsystem} out of range for {} factors",
            dims.len()
        )));
    }
    let d = dims.dims()[subsystem];
    let stride = dims.stride(subsystem);
    let n = rho.rows();
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        let di = (i / stride) % d;
        let dj = (j / stride) % d;
        let i2 = i - di * stride + dj * stride;
        let j2 = j - dj * stride + di * stride;
        rho[(i2, j2)]
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn bell() -> ComplexMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        ComplexMatrix::outer(&[c(s), c(0.0), c(0.0), c(s)])
    }

    #[test]
    fn kron_identities() {
        assert_eq!(
            kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(2)),
            ComplexMatrix::identity(4)
        );
        let p0 = ComplexMatrix::diagonal(&[1.0, 0.0]);
        let p1 = ComplexMatrix::diagonal(&[0.0, 1.0]);
        assert_eq!(
            kron(&p0, &p1),
            ComplexMatrix::diagonal(&[0.0, 1.0, 0.0, 0.0])
        );
    }

    #[test]
    fn kron_x_x_flips_both_bits() {
        let x = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let xx = kron(&x, &x);
        let out = xx.mul_vec(&[c(1.0), c(0.0), c(0.0), c(0.0)]).unwrap();
        assert_eq!(out, vec![c(0.0), c(0.0), c(0.0), c(1.0)]);
    }

    #[test]
    fn partial_trace_product_and_bell() {
        let dims = DimList::qubits(2).unwrap();
        let p00 = ComplexMatrix::outer(&[c(1.0), c(0.0), c(0.0), c(0.0)]);
        let r = partial_trace(&p00, &dims, &[0]).unwrap();
        assert_eq!(r, ComplexMatrix::diagonal(&[1.0, 0.0]));

        let r = partial_trace(&bell(), &dims, &[0]).unwrap();
        assert!(r.max_abs_diff(&ComplexMatrix::diagonal(&[0.5, 0.5])) < 1e-15);
    }

    #[test]
    fn partial_trace_w4_pair() {
        let mut amp = vec![c(0.0); 16];
        for k in 0..4 {
            amp[1 << (3 - k)] = c(0.5);
        }
        let rho = ComplexMatrix::outer(&amp);
        let dims = DimList::qubits(4).unwrap();
        let r = partial_trace(&rho, &dims, &[0, 1]).unwrap();
        let diag: Vec<f64> = (0..4).map(|i| r[(i, i)].re).collect();
        assert_eq!(diag, vec![0.5, 0.25, 0.25, 0.0]);
        assert!((r[(1, 2)] - c(0.25)).norm() < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_bad_input() {
        let dims = DimList::qubits(2).unwrap();
        let rho = ComplexMatrix::identity(4);
        assert!(partial_trace(&rho, &dims, &[]).is_err());
        assert!(partial_trace(&rho, &dims, &[2]).is_err());
        assert!(partial_trace(&rho, &dims, &[0, 0]).is_err());
        assert!(partial_trace(&ComplexMatrix::identity(8), &dims, &[0]).is_err());
    }

    #[test]
    fn partial_transpose_cases() {
        let dims = DimList::qubits(2).unwrap();
        let mixed = ComplexMatrix::identity(4).scale(c(0.25));
        assert_eq!(partial_transpose(&mixed, &dims, 0).unwrap(), mixed);

        let pt = partial_transpose(&bell(), &dims, 0).unwrap();
        // |01><10| and |10><01| move onto the anti-diagonal block.
        assert!((pt[(1, 2)] - c(0.5)).norm() < 1e-15);
        assert!(pt[(0, 3)].norm() < 1e-15);
        assert_eq!(partial_transpose(&pt, &dims, 0).unwrap(), bell());
        assert!(partial_transpose(&bell(), &dims, 2).is_err());
    }
}
