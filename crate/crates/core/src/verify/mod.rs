//! Randomized verification: seeded samplers, a brute-force convex-roof
//! oracle and the fuzz harness that evaluates the whole inequality catalog.
//!
//! Generators are ChaCha8 (`rand_chacha`). A fuzz trial draws from the
//! stream `trial` of a generator keyed by the master seed, so serial and
//! parallel runs see the same numbers.

mod fuzz;
mod oracle;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::measures::{concurrence_pure, concurrence_two_qubit, Bipartition};
use crate::qlinalg::{ComplexMatrix, DimList};
use crate::state::{DensityMatrix, PureState};
use crate::wclass::{build_state, reduce, SubsystemSelection, WClassCoefficients};

pub use fuzz::{run_fuzz, FuzzConfig, FuzzSummary, IdStats, WorstCase};
pub use oracle::{convex_roof_oracle, Objective, OracleBudget, OracleMeasure, OracleResult};

/// Standard complex Gaussian (unit variance per real component).
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Coefficients `(a, b_1..b_n)` uniform on the complex unit sphere.
pub fn sample_wclass<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<WClassCoefficients> {
    loop {
        let a = complex_gaussian(rng);
        let b: Vec<Complex64> = (0..n).map(|_| complex_gaussian(rng)).collect();
        // a zero draw has probability zero; redraw rather than fail
        match WClassCoefficients::normalized(a, b) {
            Err(crate::Error::NotNormalized { norm_sqr: 0.0 }) => continue,
            other => return other,
        }
    }
}

/// Haar-random pure state on `dims`.
pub fn random_pure_state<R: Rng + ?Sized>(dims: DimList, rng: &mut R) -> Result<PureState> {
    let amps = (0..dims.total()).map(|_| complex_gaussian(rng)).collect();
    PureState::normalized(amps, dims)
}

/// `G G^dagger / Tr` with `G` a `d x rank` complex Gaussian matrix; rank
/// exactly `rank` with probability one.
pub fn random_density_matrix<R: Rng + ?Sized>(
    dims: DimList,
    rank: usize,
    rng: &mut R,
) -> Result<DensityMatrix> {
    let d = dims.total();
    let g = ComplexMatrix::from_fn(d, rank, |_, _| complex_gaussian(rng));
    let m = g.matmul(&g.adjoint())?;
    let tr = m.trace().re;
    let m = ComplexMatrix::from_fn(d, d, |i, j| {
        if i == j {
            Complex64::new(m[(i, i)].re / tr, 0.0)
        } else {
            0.5 * (m[(i, j)] + m[(j, i)].conj()) / tr
        }
    });
    DensityMatrix::new(m, dims)
}

/// `|C^2(A|rest) - sum_i C^2(rho_{AB_i})|`, with the left side from the pure
/// state and every pair value from the spin-flip formula.
pub fn ckw_saturation_check(c: &WClassCoefficients) -> Result<f64> {
    let n = c.n_qubits();
    let whole = concurrence_pure(&build_state(c), &Bipartition::first_vs_rest(n)?)?;
    let mut pairs = 0.0;
    for j in 1..n {
        let rho = reduce(c, &SubsystemSelection::new(n, vec![j])?)?;
        pairs += concurrence_two_qubit(&rho)?.powi(2);
    }
    Ok((whole * whole - pairs).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_are_normalized_and_reproducible() {
        let mut r1 = ChaCha8Rng::seed_from_u64(3);
        let mut r2 = ChaCha8Rng::seed_from_u64(3);
        for n in 2..8 {
            let a = sample_wclass(n, &mut r1).unwrap();
            let b = sample_wclass(n, &mut r2).unwrap();
            assert_eq!(a, b);
            let norm: f64 = a.a().norm_sqr() + a.b().iter().map(|z| z.norm_sqr()).sum::<f64>();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn vacuum_amplitude_mean() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 4;
        let samples: Vec<f64> = (0..100_000)
            .map(|_| sample_wclass(n, &mut rng).unwrap().a().norm_sqr())
            .collect();
        let mean = samples.iter().sum::<f64>() / samples.len() as f64;
        let var =
            samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (samples.len() - 1) as f64;
        let se = (var / samples.len() as f64).sqrt();
        assert!(
            (mean - 1.0 / (n as f64 + 1.0)).abs() < 3.0 * se,
            "mean {mean} se {se}"
        );
    }

    #[test]
    fn ckw_examples() {
        let w = WClassCoefficients::uniform_w(4).unwrap();
        assert!(ckw_saturation_check(&w).unwrap() < 1e-12);
        let vac =
            WClassCoefficients::new(Complex64::new(1.0, 0.0), vec![Complex64::new(0.0, 0.0); 4])
                .unwrap();
        assert_eq!(ckw_saturation_check(&vac).unwrap(), 0.0);
    }

    #[test]
    fn random_density_has_requested_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for rank in 1..=4 {
            let rho = random_density_matrix(DimList::qubits(2).unwrap(), rank, &mut rng).unwrap();
            assert_eq!(rho.rank().unwrap(), rank);
        }
    }
}
