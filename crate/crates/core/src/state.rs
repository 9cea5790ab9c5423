//! Pure states and density matrices over a fixed tensor factorization.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qlinalg::{self, ComplexMatrix, DimList};
use crate::tolerance::Tolerances;

/// Normalized amplitude vector. Amplitude `i` belongs to the basis state whose
/// factor digits spell `i` with factor 0 most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
    dims: DimList,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>, dims: DimList) -> Result<Self> {
        if amplitudes.len() != dims.total() {
            return Err(Error::DimensionMismatch {
                expected: dims.total(),
                found: amplitudes.len(),
            });
        }
        let norm_sqr: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > Tolerances::DEFAULT.state_norm {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(PureState { amplitudes, dims })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(amplitudes: Vec<Complex64>, dims: DimList) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized {
                norm_sqr: norm * norm,
            });
        }
        let scaled = amplitudes.into_iter().map(|z| z / norm).collect();
        Self::new(scaled, dims)
    }

    pub fn qubits(amplitudes: Vec<Complex64>) -> Result<Self> {
        let n = amplitudes.len().trailing_zeros() as usize;
        if amplitudes.len() != 1 << n || n == 0 {
            return Err(Error::InvalidInput(format!(
                "{} amplitudes is not a multi-qubit register",
                amplitudes.len()
            )));
        }
        Self::new(amplitudes, DimList::qubits(n)?)
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn dims(&self) -> &DimList {
        &self.dims
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Multiplies every amplitude by `e^{i phase}`.
    pub fn with_global_phase(&self, phase: f64) -> Self {
        let w = Complex64::from_polar(1.0, phase);
        PureState {
            amplitudes: self.amplitudes.iter().map(|&z| z * w).collect(),
            dims: self.dims.clone(),
        }
    }

    /// Reduced density matrix on `keep` (ascending factor order), computed as
    /// `Psi Psi^dagger` with `Psi` the kept-by-traced reshaping of the amplitudes.
    pub fn reduced(&self, keep: &[usize]) -> Result<ComplexMatrix> {
        let keep = self.dims.checked_subset(keep)?;
        let (dk, dt, table) = self.dims.split_table(&keep);
        let mut out = ComplexMatrix::zeros(dk, dk);
        for t in 0..dt {
            let idx = &table[t * dk..(t + 1) * dk];
            for (k1, &r) in idx.iter().enumerate() {
                let a = self.amplitudes[r];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for (k2, &c) in idx.iter().enumerate() {
                    out[(k1, k2)] += a * self.amplitudes[c].conj();
                }
            }
        }
        Ok(out)
    }

    pub fn reduced_density(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let keep_sorted = self.dims.checked_subset(keep)?;
        let m = self.reduced(&keep_sorted)?;
        DensityMatrix::new(m, self.dims.sub(&keep_sorted)?)
    }

    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix {
            matrix: ComplexMatrix::outer(&self.amplitudes),
            dims: self.dims.clone(),
        }
    }
}

/// Hermitian, unit-trace matrix with its tensor factorization. Positivity is
/// checked by the operations that diagonalize it.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    dims: DimList,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix, dims: DimList) -> Result<Self> {
        let n = matrix.ensure_square()?;
        if n != dims.total() {
            return Err(Error::DimensionMismatch {
                expected: dims.total(),
                found: n,
            });
        }
        let tol = Tolerances::DEFAULT;
        let dev = matrix.hermitian_deviation();
        if dev > tol.hermitian {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > tol.trace {
            return Err(Error::NotUnitTrace { trace });
        }
        Ok(DensityMatrix { matrix, dims })
    }

    /// Density matrix on two qubits.
    pub fn two_qubit(matrix: ComplexMatrix) -> Result<Self> {
        Self::new(matrix, DimList::qubits(2)?)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &DimList {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let keep_sorted = self.dims.checked_subset(keep)?;
        let m = qlinalg::partial_trace(&self.matrix, &self.dims, &keep_sorted)?;
        DensityMatrix::new(m, self.dims.sub(&keep_sorted)?)
    }

    /// Eigen-rank after zeroing round-off eigenvalues.
    pub fn rank(&self) -> Result<usize> {
        let tol = Tolerances::DEFAULT;
        let eig = qlinalg::psd_eigen_with(&self.matrix, &tol)?;
        Ok(eig.values.iter().filter(|&&v| v > tol.psd_clamp).count())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn reduced_matches_partial_trace_of_projector() {
        let amps: Vec<Complex64> = (0..8)
            .map(|k| Complex64::new((k as f64 * 0.7).sin(), (k as f64 * 1.3).cos()))
            .collect();
        let psi = PureState::normalized(amps, DimList::qubits(3).unwrap()).unwrap();
        let proj = psi.projector();
        for keep in [
            vec![0],
            vec![1],
            vec![2],
            vec![0, 2],
            vec![1, 2],
            vec![0, 1, 2],
        ] {
            let a = psi.reduced(&keep).unwrap();
            let b = proj.partial_trace(&keep).unwrap();
            assert!(a.max_abs_diff(b.matrix()) < 1e-15, "keep {keep:?}");
        }
    }

    #[test]
    fn constructors_validate() {
        assert!(PureState::qubits(vec![c(1.0), c(1.0)]).is_err());
        assert!(PureState::qubits(vec![c(1.0), c(0.0), c(0.0)]).is_err());
        assert!(PureState::normalized(vec![c(0.0); 4], DimList::qubits(2).unwrap()).is_err());
        assert!(DensityMatrix::two_qubit(ComplexMatrix::identity(4)).is_err());
        let bad = ComplexMatrix::from_real(2, 2, &[0.5, 0.1, 0.0, 0.5]).unwrap();
        assert!(DensityMatrix::new(bad, DimList::qubits(1).unwrap()).is_err());
    }

    #[test]
    fn ranks() {
        let psi = PureState::qubits(vec![c(0.6), c(0.0), c(0.0), c(0.8)]).unwrap();
        assert_eq!(psi.projector().rank().unwrap(), 1);
        assert_eq!(psi.reduced_density(&[0]).unwrap().rank().unwrap(), 2);
    }
}
