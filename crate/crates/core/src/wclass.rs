//! Generalized W-class states
//! `a|00...0> + b_1|10...0> + b_2|01...0> + ... + b_N|00...1>`
//! and the closed-form concurrences of their reductions.
//!
//! Amplitude `b_1` sits on qubit A (factor 0) and `b_{i+1}` on qubit `B_i`
//! (factor `i`). Every reduction onto A plus a block of B qubits is a mixture
//! of `|0...0>` and one vector in the span of `|0...0>` and the single
//! excitations, so it has rank at most two.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qlinalg::DimList;
use crate::state::{DensityMatrix, PureState};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq)]
pub struct WClassCoefficients {
    a: Complex64,
    b: Vec<Complex64>,
}

impl WClassCoefficients {
    /// `b[k]` is the amplitude of the excitation on qubit `k` (qubit 0 = A).
    pub fn new(a: Complex64, b: Vec<Complex64>) -> Result<Self> {
        if b.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "W-class state needs at least 2 qubits, got {}",
                b.len()
            )));
        }
        let norm_sqr = a.norm_sqr() + b.iter().map(|z| z.norm_sqr()).sum::<f64>();
        if (norm_sqr - 1.0).abs() > Tolerances::DEFAULT.coefficient_norm {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(WClassCoefficients { a, b })
    }

    /// Rescales the amplitudes to unit norm before validating.
    pub fn normalized(a: Complex64, b: Vec<Complex64>) -> Result<Self> {
        let norm = (a.norm_sqr() + b.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized {
                norm_sqr: norm * norm,
            });
        }
        Self::new(a / norm, b.into_iter().map(|z| z / norm).collect())
    }

    /// The symmetric W state `(|10..0> + ... + |0..01>)/sqrt(n)`.
    pub fn uniform_w(n: usize) -> Result<Self> {
        let amp = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
        Self::normalized(Complex64::new(0.0, 0.0), vec![amp; n])
    }

    pub fn n_qubits(&self) -> usize {
        self.b.len()
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    pub fn b(&self) -> &[Complex64] {
        &self.b
    }

    /// Excitation amplitude on qubit A (`b_1`).
    pub fn on_a(&self) -> Complex64 {
        self.b[0]
    }

    /// Excitation amplitude on qubit `B_i` (`b_{i+1}`), `1 <= i <= N-1`.
    pub fn on_b(&self, i: usize) -> Complex64 {
        self.b[i]
    }
}

/// An ordered block `B_{j_1}, ..., B_{j_{m-1}}` of distinct B qubits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubsystemSelection {
    n_qubits: usize,
    block: Vec<usize>,
}

impl SubsystemSelection {
    pub fn new(n_qubits: usize, block: Vec<usize>) -> Result<Self> {
        if block.is_empty() {
            return Err(Error::InvalidSubsystem(
                "block must select at least one B qubit".into(),
            ));
        }
        if let Some(&j) = block.iter().find(|&&j| j == 0 || j >= n_qubits) {
            return Err(Error::InvalidSubsystem(format!(
                "B index {j} outside 1..={}",
                n_qubits.saturating_sub(1)
            )));
        }
        let mut seen = vec![false; n_qubits];
        for &j in &block {
            if std::mem::replace(&mut seen[j], true) {
                return Err(Error::InvalidSubsystem(format!("B index {j} repeated")));
            }
        }
        Ok(SubsystemSelection { n_qubits, block })
    }

    /// All B qubits in natural order.
    pub fn full(n_qubits: usize) -> Result<Self> {
        Self::new(n_qubits, (1..n_qubits).collect())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn indices(&self) -> &[usize] {
        &self.block
    }

    /// Number of qubits in the reduced state, A included.
    pub fn m(&self) -> usize {
        self.block.len() + 1
    }

    pub fn is_full(&self) -> bool {
        self.block.len() + 1 == self.n_qubits
    }

    /// The block `B_{j_{pos+1}}, ..., B_{j_{m-1}}` (0-based `pos`).
    pub fn tail(&self, pos: usize) -> Option<Self> {
        (pos < self.block.len()).then(|| SubsystemSelection {
            n_qubits: self.n_qubits,
            block: self.block[pos..].to_vec(),
        })
    }

    /// Tensor factors of the reduced state: A followed by the block.
    pub fn factors(&self) -> Vec<usize> {
        std::iter::once(0)
            .chain(self.block.iter().copied())
            .collect()
    }

    fn check_against(&self, c: &WClassCoefficients) -> Result<()> {
        if self.n_qubits != c.n_qubits() {
            return Err(Error::InvalidSubsystem(format!(
                "selection built for {} qubits, state has {}",
                self.n_qubits,
                c.n_qubits()
            )));
        }
        Ok(())
    }
}

pub fn build_state(c: &WClassCoefficients) -> PureState {
    let n = c.n_qubits();
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    amps[0] = c.a;
    for (k, &bk) in c.b.iter().enumerate() {
        amps[1 << (n - 1 - k)] = bk;
    }
    PureState::new(amps, DimList::qubits(n).expect("n >= 2")).expect("coefficients are normalized")
}

/// Reduced state on A and the selected block. Factors are in ascending
/// qubit order regardless of the block's ordering.
pub fn reduce(c: &WClassCoefficients, sel: &SubsystemSelection) -> Result<DensityMatrix> {
    sel.check_against(c)?;
    build_state(c).reduced_density(&sel.factors())
}

/// `C(rho_{AB_i}) = C_a(rho_{AB_i}) = 2 |b_1| |b_{i+1}|`.
pub fn pair_concurrence_closed(c: &WClassCoefficients, i: usize) -> Result<f64> {
    if i == 0 || i >= c.n_qubits() {
        return Err(Error::InvalidSubsystem(format!(
            "B index {i} outside 1..={}",
            c.n_qubits() - 1
        )));
    }
    Ok(2.0 * c.on_a().norm() * c.on_b(i).norm())
}

/// `C(rho_{A|block}) = 2 |b_1| sqrt(sum_{i in block} |b_{i+1}|^2)`.
pub fn block_concurrence_closed(c: &WClassCoefficients, block: &SubsystemSelection) -> Result<f64> {
    block.check_against(c)?;
    let weight: f64 = block.indices().iter().map(|&i| c.on_b(i).norm_sqr()).sum();
    Ok(2.0 * c.on_a().norm() * weight.sqrt())
}
