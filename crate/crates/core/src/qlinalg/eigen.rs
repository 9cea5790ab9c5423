use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

/// Eigendecomposition of a Hermitian matrix. Eigenvalues are sorted in
/// descending order; column `k` of `vectors` belongs to `values[k]`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `V diag(f(values)) V^dagger`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let fv: Vec<f64> = self.values.iter().map(|&v| f(v)).collect();
        let v = &self.vectors;
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .filter(|&k| fv[k] != 0.0)
                .map(|k| v[(i, k)] * v[(j, k)].conj() * fv[k])
                .sum()
        })
    }
}

pub fn hermitian_eig(h: &ComplexMatrix) -> Result<HermitianEigen> {
    hermitian_eig_with(h, &Tolerances::DEFAULT)
}

/// Cyclic complex Jacobi. Each rotation first rotates the phase of `h[p][q]`
/// onto the real axis, then applies a real Givens rotation that annihilates it.
pub fn hermitian_eig_with(h: &ComplexMatrix, tol: &Tolerances) -> Result<HermitianEigen> {
    let n = h.ensure_square()?;
    let dev = h.hermitian_deviation();
    if dev > tol.hermitian * h.max_abs().max(1.0) {
        return Err(Error::NotHermitian { deviation: dev });
    }
    // Work on the exactly Hermitian part.
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| 0.5 * (h[(i, j)] + h[(j, i)].conj()));
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();

    let off_norm = |a: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = scale == 0.0 || n < 2;
    let mut off = 0.0;
    let mut sweeps = 0;
    while !converged {
        off = off_norm(&a);
        if off <= tol.jacobi_off_diagonal * scale {
            converged = true;
            break;
        }
        if sweeps == tol.jacobi_max_sweeps {
            break;
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            sweeps,
            off_diagonal: off,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(HermitianEigen { values, vectors })
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let g = apq.norm();
    if g == 0.0 || !g.is_finite() {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let phase = apq / g;
    let theta = (aqq - app) / (2.0 * g);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        let t = 1.0 / (theta.abs() + (theta * theta + 1.0).sqrt());
        if theta < 0.0 {
            -t
        } else {
            t
        }
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // U = diag(1, conj(phase)) * [[c, s], [-s, c]]
    let u_pp = Complex64::new(c, 0.0);
    let u_pq = Complex64::new(s, 0.0);
    let u_qp = -s * phase.conj();
    let u_qq = c * phase.conj();

    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * u_pp + akq * u_qp;
        a[(k, q)] = akp * u_pq + akq * u_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
        a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
    }
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * u_pp + vkq * u_qp;
        v[(k, q)] = vkp * u_pq + vkq * u_qq;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(app - t * g, 0.0);
    a[(q, q)] = Complex64::new(aqq + t * g, 0.0);
}

/// `Tr sqrt(M M^dagger)`. Hermitian input takes the `sum |eigenvalue|` path.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    m.ensure_square()?;
    if m.is_hermitian(1e-12) {
        let eig = hermitian_eig(m)?;
        return Ok(eig.values.iter().map(|v| v.abs()).sum());
    }
    let mmd = m.matmul(&m.adjoint())?;
    let eig = hermitian_eig(&mmd)?;
    Ok(eig.values.iter().map(|&v| v.max(0.0).sqrt()).sum())
}

/// Eigenvalues of a PSD matrix with round-off negatives and tiny positives
/// zeroed. Fails if any eigenvalue is below `-psd_reject`.
pub fn psd_eigen_with(rho: &ComplexMatrix, tol: &Tolerances) -> Result<HermitianEigen> {
    let mut eig = hermitian_eig_with(rho, tol)?;
    if let Some(&worst) = eig.values.last() {
        if worst < -tol.psd_reject {
            return Err(Error::NotPsd { eigenvalue: worst });
        }
    }
    for v in &mut eig.values {
        if *v <= tol.rank_cutoff {
            *v = 0.0;
        }
    }
    Ok(eig)
}

pub fn psd_sqrt(rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    psd_sqrt_with(rho, &Tolerances::DEFAULT)
}

pub fn psd_sqrt_with(rho: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    let eig = psd_eigen_with(rho, tol)?;
    Ok(eig.reconstruct_with(f64::sqrt))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_and_pauli_spectra() {
        let e = hermitian_eig(&ComplexMatrix::diagonal(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(e.values, vec![3.0, 2.0, 1.0]);
        let x = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let e = hermitian_eig(&x).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-15 && (e.values[1] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn complex_hermitian_residual() {
        let h = ComplexMatrix::from_vec(
            3,
            3,
            vec![
                c(2.0, 0.0),
                c(1.0, -1.0),
                c(0.0, 0.5),
                c(1.0, 1.0),
                c(-1.0, 0.0),
                c(0.3, 0.2),
                c(0.0, -0.5),
                c(0.3, -0.2),
                c(0.5, 0.0),
            ],
        )
        .unwrap();
        let e = hermitian_eig(&h).unwrap();
        for k in 0..3 {
            let col = e.vectors.col(k);
            let hv = h.mul_vec(&col).unwrap();
            let res = hv
                .iter()
                .zip(&col)
                .map(|(a, b)| (a - b * e.values[k]).norm())
                .fold(0.0, f64::max);
            assert!(res < 1e-12, "residual {res}");
        }
        let rec = e.reconstruct_with(|v| v);
        assert!(rec.max_abs_diff(&h) < 1e-13);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(hermitian_eig(&m), Err(Error::NotHermitian { .. })));
        assert!(hermitian_eig(&ComplexMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn reports_convergence_failure() {
        let tol = Tolerances {
            jacobi_max_sweeps: 0,
            ..Tolerances::DEFAULT
        };
        let h = ComplexMatrix::from_real(2, 2, &[1.0, 0.5, 0.5, 1.0]).unwrap();
        assert!(matches!(
            hermitian_eig_with(&h, &tol),
            Err(Error::NoConvergence { .. })
        ));
    }

    #[test]
    fn trace_norms() {
        assert!((trace_norm(&ComplexMatrix::identity(4)).unwrap() - 4.0).abs() < 1e-15);
        assert_eq!(trace_norm(&ComplexMatrix::zeros(3, 3)).unwrap(), 0.0);
        // non-Hermitian path: nilpotent Jordan block has singular values (1, 0)
        let j = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!((trace_norm(&j).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn square_roots() {
        let r = psd_sqrt(&ComplexMatrix::diagonal(&[0.25, 0.25])).unwrap();
        assert!(r.max_abs_diff(&ComplexMatrix::diagonal(&[0.5, 0.5])) < 1e-15);
        let r = psd_sqrt(&ComplexMatrix::diagonal(&[9.0 / 16.0, 1.0 / 16.0])).unwrap();
        assert!(r.max_abs_diff(&ComplexMatrix::diagonal(&[0.75, 0.25])) < 1e-15);
        let bad = ComplexMatrix::diagonal(&[1.0, -1e-6]);
        assert!(matches!(psd_sqrt(&bad), Err(Error::NotPsd { .. })));
        // round-off negatives are clamped
        assert!(psd_sqrt(&ComplexMatrix::diagonal(&[1.0, -1e-11])).is_ok());
    }
}
