//! Entanglement quantifiers: pure-state concurrence, two-qubit concurrence
//! and concurrence of assistance, negativity, and the convex-roof extended
//! negativity (CREN) and its assistance counterpart (CRENOA).
//!
//! Negativity uses the unnormalized convention `||rho^{T_A}|| - 1`, under
//! which it coincides with concurrence on Schmidt-rank-2 pure states.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qlinalg::{self, ComplexMatrix};
use crate::state::{DensityMatrix, PureState};
use crate::tolerance::Tolerances;

/// Split of the tensor factors into two non-empty complementary sides.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bipartition {
    side_a: Vec<usize>,
    side_b: Vec<usize>,
}

impl Bipartition {
    pub fn new(side_a: Vec<usize>, n_factors: usize) -> Result<Self> {
        let mut side_a = side_a;
        side_a.sort_unstable();
        side_a.dedup();
        if side_a.is_empty() || side_a.len() >= n_factors {
            return Err(Error::InvalidSubsystem(format!(
                "side A {side_a:?} must be a non-empty proper subset of {n_factors} factors"
            )));
        }
        if let Some(&k) = side_a.iter().find(|&&k| k >= n_factors) {
            return Err(Error::InvalidSubsystem(format!("factor {k} out of range")));
        }
        let side_b = (0..n_factors).filter(|k| !side_a.contains(k)).collect();
        Ok(Bipartition { side_a, side_b })
    }

    /// Factor 0 against everything else.
    pub fn first_vs_rest(n_factors: usize) -> Result<Self> {
        Self::new(vec![0], n_factors)
    }

    pub fn side_a(&self) -> &[usize] {
        &self.side_a
    }

    pub fn side_b(&self) -> &[usize] {
        &self.side_b
    }

    fn n_factors(&self) -> usize {
        self.side_a.len() + self.side_b.len()
    }

    fn check(&self, n_factors: usize) -> Result<()> {
        if self.n_factors() != n_factors {
            return Err(Error::DimensionMismatch {
                expected: self.n_factors(),
                found: n_factors,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeasureKind {
    /// Concurrence `C`.
    Concurrence,
    /// Concurrence of assistance `C_a`.
    Coa,
    /// Negativity `N`.
    Negativity,
    /// Convex-roof extended negativity `N_c`.
    Cren,
    /// Convex-roof extended negativity of assistance `N_a`.
    Crenoa,
}

impl MeasureKind {
    pub fn symbol(self) -> &'static str {
        match self {
            MeasureKind::Concurrence => "C",
            MeasureKind::Coa => "C_a",
            MeasureKind::Negativity => "N",
            MeasureKind::Cren => "N_c",
            MeasureKind::Crenoa => "N_a",
        }
    }
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureValue {
    pub kind: MeasureKind,
    pub value: f64,
}

/// Sum of the 2x2 principal minors of `rho`. For unit trace this equals
/// `(1 - Tr rho^2) / 2` without the cancellation of `1 - Tr rho^2` near
/// product states.
fn principal_minor_sum(rho: &ComplexMatrix) -> f64 {
    let n = rho.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            s += rho[(i, i)].re * rho[(j, j)].re - rho[(i, j)].norm_sqr();
        }
    }
    s
}

/// `sqrt(2 (1 - Tr rho_A^2))` with `rho_A` the reduction onto side A.
pub fn concurrence_pure(psi: &PureState, cut: &Bipartition) -> Result<f64> {
    cut.check(psi.dims().len())?;
    check_norm(psi)?;
    let rho_a = psi.reduced(cut.side_a())?;
    Ok((4.0 * principal_minor_sum(&rho_a)).max(0.0).sqrt())
}

/// `(Tr sqrt(rho_A))^2 - 1 = 2 sum_{i<j} sqrt(l_i l_j)`.
pub fn negativity_pure(psi: &PureState, cut: &Bipartition) -> Result<f64> {
    cut.check(psi.dims().len())?;
    check_norm(psi)?;
    let rho_a = psi.reduced(cut.side_a())?;
    if rho_a.rows() == 2 {
        return Ok(2.0 * principal_minor_sum(&rho_a).max(0.0).sqrt());
    }
    let eig = qlinalg::psd_eigen_with(&rho_a, &Tolerances::DEFAULT)?;
    let l = &eig.values;
    let mut s = 0.0;
    for i in 0..l.len() {
        for j in i + 1..l.len() {
            s += (l[i] * l[j]).sqrt();
        }
    }
    Ok(2.0 * s)
}

fn check_norm(psi: &PureState) -> Result<()> {
    let norm_sqr = psi.norm_sqr();
    if (norm_sqr - 1.0).abs() > Tolerances::DEFAULT.state_norm {
        return Err(Error::NotNormalized { norm_sqr });
    }
    Ok(())
}

/// `||rho^{T_A}|| - 1`, transposing every factor on side A.
pub fn negativity(rho: &DensityMatrix, cut: &Bipartition) -> Result<f64> {
    cut.check(rho.dims().len())?;
    let mut pt = rho.matrix().clone();
    for &k in cut.side_a() {
        pt = qlinalg::partial_transpose(&pt, rho.dims(), k)?;
    }
    Ok((qlinalg::trace_norm(&pt)? - 1.0).max(0.0))
}

/// Descending `lambda_1..lambda_4`: square roots of the eigenvalues of
/// `rho (Y x Y) conj(rho) (Y x Y)`.
///
/// With `rho = W W^dagger` (`W` = eigenvectors scaled by `sqrt(eigenvalue)`),
/// these are the singular values of the symmetric matrix `W^T (Y x Y) W`,
/// which are read off the Hermitian dilation `[[0, T], [T^dagger, 0]]`.
/// That keeps the small lambdas at absolute round-off accuracy instead of the
/// square root of it.
pub fn spin_flip_lambdas(rho: &DensityMatrix) -> Result<[f64; 4]> {
    if rho.dims().dims() != [2, 2] {
        return Err(Error::InvalidInput(format!(
            "expected a two-qubit density matrix, got factor dims {:?}",
            rho.dims().dims()
        )));
    }
    let eig = qlinalg::psd_eigen_with(rho.matrix(), &Tolerances::DEFAULT)?;
    let support: Vec<usize> = (0..4).filter(|&k| eig.values[k] > 0.0).collect();
    let r = support.len();
    let w: Vec<[Complex64; 4]> = support
        .iter()
        .map(|&k| {
            let s = eig.values[k].sqrt();
            std::array::from_fn(|i| eig.vectors[(i, k)] * s)
        })
        .collect();
    // (Y x Y) w = (-w3, w2, w1, -w0)
    let flip = |v: &[Complex64; 4]| [-v[3], v[2], v[1], -v[0]];
    let tau = ComplexMatrix::from_fn(r, r, |k, l| {
        let fl = flip(&w[l]);
        (0..4).map(|i| w[k][i] * fl[i]).sum()
    });

    let mut lambdas = [0.0; 4];
    match r {
        0 => {}
        1 => lambdas[0] = tau[(0, 0)].norm(),
        _ => {
            let dilation = ComplexMatrix::from_fn(2 * r, 2 * r, |i, j| match (i < r, j < r) {
                (true, false) => tau[(i, j - r)],
                (false, true) => tau[(j, i - r)].conj(),
                _ => Complex64::new(0.0, 0.0),
            });
            let d = qlinalg::hermitian_eig(&dilation)?;
            for (slot, v) in lambdas.iter_mut().zip(&d.values[..r]) {
                *slot = v.max(0.0);
            }
        }
    }
    Ok(lambdas)
}

/// Two-qubit concurrence `max(0, l1 - l2 - l3 - l4)`.
pub fn concurrence_two_qubit(rho: &DensityMatrix) -> Result<f64> {
    let l = spin_flip_lambdas(rho)?;
    Ok((l[0] - l[1] - l[2] - l[3]).max(0.0))
}

/// Two-qubit concurrence of assistance `l1 + l2 + l3 + l4`.
pub fn coa_two_qubit(rho: &DensityMatrix) -> Result<f64> {
    let l = spin_flip_lambdas(rho)?;
    Ok(l.iter().sum())
}

/// CREN of a two-qubit state; equals its concurrence since every two-qubit
/// pure state has Schmidt rank at most two.
pub fn cren_two_qubit(rho: &DensityMatrix) -> Result<f64> {
    concurrence_two_qubit(rho)
}

/// CRENOA of a two-qubit state; equals its concurrence of assistance.
pub fn crenoa_two_qubit(rho: &DensityMatrix) -> Result<f64> {
    coa_two_qubit(rho)
}

pub fn measure_two_qubit(kind: MeasureKind, rho: &DensityMatrix) -> Result<MeasureValue> {
    let cut = Bipartition::first_vs_rest(2)?;
    let value = match kind {
        MeasureKind::Concurrence => concurrence_two_qubit(rho)?,
        MeasureKind::Coa => coa_two_qubit(rho)?,
        MeasureKind::Negativity => negativity(rho, &cut)?,
        MeasureKind::Cren => cren_two_qubit(rho)?,
        MeasureKind::Crenoa => crenoa_two_qubit(rho)?,
    };
    Ok(MeasureValue { kind, value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::DimList;
    use crate::wclass::{build_state, reduce, SubsystemSelection, WClassCoefficients};

    fn r(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn bell() -> PureState {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        PureState::qubits(vec![r(s), r(0.0), r(0.0), r(s)]).unwrap()
    }

    #[test]
    fn pure_concurrence_examples() {
        let cut = Bipartition::first_vs_rest(2).unwrap();
        let prod = PureState::qubits(vec![r(1.0), r(0.0), r(0.0), r(0.0)]).unwrap();
        assert_eq!(concurrence_pure(&prod, &cut).unwrap(), 0.0);
        assert!((concurrence_pure(&bell(), &cut).unwrap() - 1.0).abs() < 1e-15);
        let w = build_state(&WClassCoefficients::uniform_w(4).unwrap());
        let c = concurrence_pure(&w, &Bipartition::first_vs_rest(4).unwrap()).unwrap();
        assert!((c - 0.866_025_403_784_438_6).abs() < 1e-15);
        assert!(concurrence_pure(&w, &cut).is_err());
    }

    #[test]
    fn two_qubit_examples() {
        let mixed = DensityMatrix::two_qubit(ComplexMatrix::identity(4).scale(r(0.25))).unwrap();
        assert_eq!(concurrence_two_qubit(&mixed).unwrap(), 0.0);
        let b = bell().projector();
        assert!((concurrence_two_qubit(&b).unwrap() - 1.0).abs() < 1e-14);
        assert!((coa_two_qubit(&b).unwrap() - 1.0).abs() < 1e-14);

        let w = WClassCoefficients::uniform_w(4).unwrap();
        let pair = reduce(&w, &SubsystemSelection::new(4, vec![1]).unwrap()).unwrap();
        for f in [
            concurrence_two_qubit,
            coa_two_qubit,
            cren_two_qubit,
            crenoa_two_qubit,
        ] {
            assert!((f(&pair).unwrap() - 0.5).abs() < 1e-14);
        }
    }

    #[test]
    fn two_qubit_rejects_other_shapes() {
        let one = PureState::qubits(vec![r(1.0), r(0.0)]).unwrap().projector();
        assert!(concurrence_two_qubit(&one).is_err());
        let three = build_state(&WClassCoefficients::uniform_w(3).unwrap()).projector();
        assert!(coa_two_qubit(&three).is_err());
    }

    #[test]
    fn negativity_examples() {
        let cut = Bipartition::first_vs_rest(2).unwrap();
        let prod = PureState::qubits(vec![r(0.6), r(0.8), r(0.0), r(0.0)]).unwrap();
        assert!(negativity(&prod.projector(), &cut).unwrap() < 1e-14);
        assert!(negativity_pure(&prod, &cut).unwrap() < 1e-14);
        assert!((negativity(&bell().projector(), &cut).unwrap() - 1.0).abs() < 1e-14);
        assert!((negativity_pure(&bell(), &cut).unwrap() - 1.0).abs() < 1e-14);

        let w = build_state(&WClassCoefficients::uniform_w(4).unwrap());
        let cut4 = Bipartition::first_vs_rest(4).unwrap();
        let expected = 3f64.sqrt() / 2.0;
        assert!((negativity(&w.projector(), &cut4).unwrap() - expected).abs() < 1e-12);
        assert!((negativity_pure(&w, &cut4).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn schmidt_rank_two_negativity_equals_concurrence() {
        let cut = Bipartition::first_vs_rest(2).unwrap();
        for l0 in [0.1, 0.3, 0.5, 0.9] {
            let l1: f64 = 1.0 - l0;
            let psi = PureState::qubits(vec![r(l0.sqrt()), r(0.0), r(0.0), r(l1.sqrt())]).unwrap();
            let expected = 2.0 * (l0 * l1).sqrt();
            assert!((negativity_pure(&psi, &cut).unwrap() - expected).abs() < 1e-14);
            assert!((concurrence_pure(&psi, &cut).unwrap() - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn bipartition_validation() {
        assert!(Bipartition::new(vec![], 2).is_err());
        assert!(Bipartition::new(vec![0, 1], 2).is_err());
        assert!(Bipartition::new(vec![3], 3).is_err());
        let b = Bipartition::new(vec![2, 0], 4).unwrap();
        assert_eq!(b.side_a(), &[0, 2]);
        assert_eq!(b.side_b(), &[1, 3]);
        let psi = PureState::new(
            vec![r(1.0), r(0.0), r(0.0), r(0.0)],
            DimList::new(vec![4]).unwrap(),
        )
        .unwrap();
        assert!(concurrence_pure(&psi, &Bipartition::first_vs_rest(2).unwrap()).is_err());
    }
}
