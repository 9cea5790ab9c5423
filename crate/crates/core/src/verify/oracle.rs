use num_complex::Complex64;
use rand::Rng;

use super::complex_gaussian;
use crate::error::{Error, Result};
use crate::qlinalg::{self, ComplexMatrix};
use crate::state::DensityMatrix;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    Min,
    Max,
}

impl Objective {
    fn better(self, a: f64, b: f64) -> bool {
        match self {
            Objective::Min => a < b,
            Objective::Max => a > b,
        }
    }
}

/// Pure-state measure averaged by the oracle, taken across factor 0 versus
/// the remaining factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMeasure {
    Concurrence,
    Negativity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    /// Random decompositions drawn.
    pub starts: usize,
    /// Perturbation steps spent on each refined start.
    pub refine_steps: usize,
    /// How many of the best random starts are refined.
    pub refined_starts: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            starts: 20_000,
            refine_steps: 200,
            refined_starts: 16,
        }
    }
}

#[derive(Debug, Clone)]
pub struct OracleResult {
    /// Best average measure found: an upper bound on the convex roof for
    /// `Min`, a lower bound for `Max`.
    pub value: f64,
    pub weights: Vec<f64>,
    /// Normalized pure states of the best decomposition.
    pub states: Vec<Vec<Complex64>>,
    pub rank: usize,
    pub starts_used: usize,
    pub refine_steps_used: usize,
    /// Best value after the random phase, then after each refined start.
    pub trace: Vec<f64>,
}

const MAX_RANK: usize = 4;

struct Problem {
    /// `sqrt(lambda_k) e_k` for the retained eigenpairs.
    basis: Vec<Vec<Complex64>>,
    d0: usize,
    rest: usize,
    measure: OracleMeasure,
}

impl Problem {
    fn mix(&self, u: &[Complex64], r: usize, i: usize) -> Vec<Complex64> {
        let d = self.basis[0].len();
        let mut v = vec![Complex64::new(0.0, 0.0); d];
        for k in 0..r {
            let c = u[i * r + k];
            for (x, w) in v.iter_mut().zip(&self.basis[k]) {
                *x += c * w;
            }
        }
        v
    }

    /// `p E(psi / sqrt(p))` for an unnormalized vector of weight `p`.
    fn weighted_measure(&self, v: &[Complex64]) -> f64 {
        let (d0, rest) = (self.d0, self.rest);
        let mut rho = vec![Complex64::new(0.0, 0.0); d0 * d0];
        for a in 0..d0 {
            for b in a..d0 {
                let s: Complex64 = (0..rest)
                    .map(|t| v[a * rest + t] * v[b * rest + t].conj())
                    .sum();
                rho[a * d0 + b] = s;
                rho[b * d0 + a] = s.conj();
            }
        }
        if d0 == 2 {
            // concurrence and negativity agree on a qubit cut: 2 sqrt(det)
            let det = rho[0].re * rho[3].re - rho[1].norm_sqr();
            return 2.0 * det.max(0.0).sqrt();
        }
        let p: f64 = (0..d0).map(|a| rho[a * d0 + a].re).sum();
        match self.measure {
            OracleMeasure::Concurrence => {
                let purity: f64 = rho.iter().map(|z| z.norm_sqr()).sum();
                (2.0 * (p * p - purity)).max(0.0).sqrt()
            }
            OracleMeasure::Negativity => {
                let m = ComplexMatrix::from_vec(d0, d0, rho).expect("square");
                let s: f64 = qlinalg::hermitian_eig(&m)
                    .map(|e| e.values.iter().map(|l| l.max(0.0).sqrt()).sum())
                    .unwrap_or(0.0);
                (s * s - p).max(0.0)
            }
        }
    }

    fn score(&self, u: &[Complex64], l: usize, r: usize) -> f64 {
        (0..l)
            .map(|i| self.weighted_measure(&self.mix(u, r, i)))
            .sum()
    }
}

/// Orthonormalizes the `r` columns of the row-major `l x r` matrix in place.
fn orthonormalize_columns(u: &mut [Complex64], l: usize, r: usize) -> bool {
    for k in 0..r {
        for j in 0..k {
            let dot: Complex64 = (0..l).map(|i| u[i * r + j].conj() * u[i * r + k]).sum();
            for i in 0..l {
                let sub = dot * u[i * r + j];
                u[i * r + k] -= sub;
            }
        }
        let norm = (0..l).map(|i| u[i * r + k].norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return false;
        }
        for i in 0..l {
            u[i * r + k] /= norm;
        }
    }
    true
}

fn random_isometry<R: Rng + ?Sized>(l: usize, r: usize, rng: &mut R) -> Vec<Complex64> {
    loop {
        let mut u: Vec<Complex64> = (0..l * r).map(|_| complex_gaussian(rng)).collect();
        if orthonormalize_columns(&mut u, l, r) {
            return u;
        }
    }
}

/// Randomized search over pure-state decompositions of `rho`.
///
/// Decompositions of length `L` are `psi_i = sum_k U_ik sqrt(lambda_k) e_k`
/// for `L x rank` isometries `U`; every decomposition of that length arises
/// this way. The best random starts are then refined by small perturbations
/// of `U` that are kept only when they improve the objective.
pub fn convex_roof_oracle<R: Rng + ?Sized>(
    rho: &DensityMatrix,
    objective: Objective,
    measure: OracleMeasure,
    budget: OracleBudget,
    rng: &mut R,
) -> Result<OracleResult> {
    if budget.starts == 0 {
        return Err(Error::InvalidInput(
            "oracle budget must allow at least one start".into(),
        ));
    }
    let tol = Tolerances::DEFAULT;
    let eig = qlinalg::psd_eigen_with(rho.matrix(), &tol)?;
    let kept: Vec<usize> = (0..eig.values.len())
        .filter(|&k| eig.values[k] > tol.psd_clamp)
        .collect();
    let r = kept.len();
    if r == 0 {
        return Err(Error::InvalidInput("density matrix has no support".into()));
    }
    if r > MAX_RANK {
        return Err(Error::InvalidInput(format!(
            "oracle supports rank <= {MAX_RANK}, got {r}"
        )));
    }
    let d0 = rho.dims().dims()[0];
    let problem = Problem {
        basis: kept
            .iter()
            .map(|&k| {
                let s = eig.values[k].sqrt();
                eig.vectors.col(k).into_iter().map(|z| z * s).collect()
            })
            .collect(),
        d0,
        rest: rho.dim() / d0,
        measure,
    };

    let finish = |u: &[Complex64], l: usize, value: f64, starts_used, refine_steps_used, trace| {
        let mut weights = Vec::with_capacity(l);
        let mut states = Vec::with_capacity(l);
        for i in 0..l {
            let v = problem.mix(u, r, i);
            let p: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            if p > 0.0 {
                let n = p.sqrt();
                states.push(v.into_iter().map(|z| z / n).collect());
                weights.push(p);
            }
        }
        OracleResult {
            value,
            weights,
            states,
            rank: r,
            starts_used,
            refine_steps_used,
            trace,
        }
    };

    if r == 1 {
        // the only decomposition is the state itself
        let u = vec![Complex64::new(1.0, 0.0)];
        let value = problem.score(&u, 1, 1);
        return Ok(finish(&u, 1, value, 0, 0, vec![value]));
    }

    let l_min = r.max(2);
    let l_max = (2 * r).max(2);
    let keep = budget.refined_starts.max(1);
    // best starts, best first
    let mut top: Vec<(f64, usize, Vec<Complex64>)> = Vec::with_capacity(keep + 1);
    for _ in 0..budget.starts {
        let l = rng.random_range(l_min..=l_max);
        let u = random_isometry(l, r, rng);
        let s = problem.score(&u, l, r);
        if top.len() < keep || objective.better(s, top[top.len() - 1].0) {
            let pos = top
                .iter()
                .position(|t| objective.better(s, t.0))
                .unwrap_or(top.len());
            top.insert(pos, (s, l, u));
            top.truncate(keep);
        }
    }

    let mut trace = vec![top[0].0];
    let mut best = top[0].clone();
    let mut steps_used = 0;
    for (mut score, l, mut u) in top {
        let mut step = 0.1;
        for _ in 0..budget.refine_steps {
            steps_used += 1;
            let mut cand: Vec<Complex64> = u
                .iter()
                .map(|&z| z + complex_gaussian(rng) * step)
                .collect();
            if !orthonormalize_columns(&mut cand, l, r) {
                continue;
            }
            let s = problem.score(&cand, l, r);
            if objective.better(s, score) {
                score = s;
                u = cand;
                step = (step * 1.5).min(0.5);
            } else {
                step = (step * 0.8).max(1e-6);
            }
        }
        if objective.better(score, best.0) {
            best = (score, l, u);
        }
        trace.push(best.0);
    }
    let (value, l, u) = best;
    Ok(finish(&u, l, value, budget.starts, steps_used, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{coa_two_qubit, concurrence_two_qubit};
    use crate::qlinalg::DimList;
    use crate::state::PureState;
    use crate::verify::{random_density_matrix, random_pure_state, sample_wclass};
    use crate::wclass::{
        block_concurrence_closed, pair_concurrence_closed, reduce, SubsystemSelection,
    };
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn small() -> OracleBudget {
        OracleBudget {
            starts: 2000,
            refine_steps: 200,
            refined_starts: 8,
        }
    }

    #[test]
    fn rejects_bad_requests() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let rho = random_density_matrix(DimList::qubits(3).unwrap(), 5, &mut rng).unwrap();
        assert!(convex_roof_oracle(
            &rho,
            Objective::Min,
            OracleMeasure::Concurrence,
            small(),
            &mut rng
        )
        .is_err());
        let rho = random_density_matrix(DimList::qubits(2).unwrap(), 2, &mut rng).unwrap();
        let zero = OracleBudget {
            starts: 0,
            ..small()
        };
        assert!(convex_roof_oracle(
            &rho,
            Objective::Min,
            OracleMeasure::Concurrence,
            zero,
            &mut rng
        )
        .is_err());
    }

    #[test]
    fn pure_input_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let psi: PureState = random_pure_state(DimList::qubits(2).unwrap(), &mut rng).unwrap();
        let rho = psi.projector();
        let exact = concurrence_two_qubit(&rho).unwrap();
        for obj in [Objective::Min, Objective::Max] {
            let res = convex_roof_oracle(&rho, obj, OracleMeasure::Concurrence, small(), &mut rng)
                .unwrap();
            assert!((res.value - exact).abs() < 1e-9);
        }
    }

    #[test]
    fn wclass_pair_sandwich() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let c = sample_wclass(4, &mut rng).unwrap();
        let rho = reduce(&c, &SubsystemSelection::new(4, vec![2]).unwrap()).unwrap();
        let closed = pair_concurrence_closed(&c, 2).unwrap();
        let lo = convex_roof_oracle(
            &rho,
            Objective::Min,
            OracleMeasure::Concurrence,
            small(),
            &mut rng,
        )
        .unwrap();
        let hi = convex_roof_oracle(
            &rho,
            Objective::Max,
            OracleMeasure::Concurrence,
            small(),
            &mut rng,
        )
        .unwrap();
        assert!(
            lo.value >= closed - 1e-9 && lo.value <= closed + 1e-3,
            "{} vs {closed}",
            lo.value
        );
        let coa = coa_two_qubit(&rho).unwrap();
        assert!(hi.value <= coa + 1e-9 && hi.value >= coa - 1e-3);
        let w: f64 = lo.weights.iter().sum();
        assert!((w - 1.0).abs() < 1e-9);
    }

    #[test]
    fn five_qubit_block_min() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let c = sample_wclass(5, &mut rng).unwrap();
        let sel = SubsystemSelection::new(5, vec![1, 3]).unwrap();
        let rho = reduce(&c, &sel).unwrap();
        let closed = block_concurrence_closed(&c, &sel).unwrap();
        let lo = convex_roof_oracle(
            &rho,
            Objective::Min,
            OracleMeasure::Concurrence,
            small(),
            &mut rng,
        )
        .unwrap();
        assert!(lo.value >= closed - 1e-9 && lo.value <= closed + 2e-3);
    }
}
