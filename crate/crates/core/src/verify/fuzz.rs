use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::oracle::{convex_roof_oracle, Objective, OracleBudget, OracleMeasure};
use super::sample_wclass;
use crate::error::{Error, Result};
use crate::measures::{
    coa_two_qubit, concurrence_pure, concurrence_two_qubit, cren_two_qubit, crenoa_two_qubit,
    negativity_pure, Bipartition,
};
use crate::monogamy::{
    coa_lower_eq4, coa_upper_eq5, coa_upper_th3, concurrence_upper_eq3, crenoa_remark_cyclic,
    crenoa_th6, neg_lower_lemma2, neg_upper_lemma4, ordered_bound, remark_cyclic, split_bound,
    InequalityId, InequalityReport, OrderingProfile, WeightBase,
};
use crate::tolerance::Tolerances;
use crate::wclass::{
    block_concurrence_closed, build_state, pair_concurrence_closed, reduce, SubsystemSelection,
    WClassCoefficients,
};

/// Largest register for which every ordered block is enumerated.
const ENUMERATE_ALL_UP_TO: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct FuzzConfig {
    pub seed: u64,
    pub trials: usize,
    pub min_qubits: usize,
    pub max_qubits: usize,
    /// Exponents for the lower bounds, all `>= 2`.
    pub x_grid: Vec<f64>,
    /// Exponents for the upper bounds, all `< 0`.
    pub y_grid: Vec<f64>,
    /// Restrict evaluation to these ids; `None` evaluates all.
    pub ids: Option<Vec<InequalityId>>,
    pub oracle_budget: OracleBudget,
    /// The first this-many trials also run a convex-roof oracle cross-check.
    pub oracle_trials: usize,
    /// Chance of zeroing one B amplitude in a sampled state.
    pub zero_probability: f64,
    /// Chance of zeroing the A amplitude.
    pub zero_a_probability: f64,
    /// Random blocks per trial once the register is too large to enumerate.
    pub random_blocks: usize,
    pub weight_base: WeightBase,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            seed: 1,
            trials: 10_000,
            min_qubits: 3,
            max_qubits: 6,
            x_grid: vec![2.0, 2.5, 3.0, 5.0, 8.0],
            y_grid: vec![-0.5, -1.0, -2.0, -5.0],
            ids: None,
            oracle_budget: OracleBudget::default(),
            oracle_trials: 20,
            zero_probability: 0.25,
            zero_a_probability: 0.02,
            random_blocks: 20,
            weight_base: WeightBase::HalfExponent,
        }
    }
}

impl FuzzConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidInput(msg));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.min_qubits < 2 || self.max_qubits < self.min_qubits || self.max_qubits > 12 {
            return bad(format!(
                "qubit range {}..={} must satisfy 2 <= min <= max <= 12",
                self.min_qubits, self.max_qubits
            ));
        }
        if let Some(x) = self.x_grid.iter().find(|x| !(**x >= 2.0 && x.is_finite())) {
            return bad(format!("x-grid value {x} is below 2"));
        }
        if let Some(y) = self.y_grid.iter().find(|y| !(**y < 0.0 && y.is_finite())) {
            return bad(format!("y-grid value {y} is not negative"));
        }
        if !(0.0..=1.0).contains(&self.zero_probability)
            || !(0.0..=1.0).contains(&self.zero_a_probability)
        {
            return bad("zero-injection probabilities must lie in [0, 1]".into());
        }
        if self.oracle_trials > 0 && self.oracle_budget.starts == 0 {
            return bad("oracle budget must allow at least one start".into());
        }
        Ok(())
    }

    pub fn includes(&self, id: InequalityId) -> bool {
        self.ids.as_ref().is_none_or(|ids| ids.contains(&id))
    }

    fn selected_ids(&self) -> Vec<InequalityId> {
        InequalityId::ALL
            .into_iter()
            .filter(|&id| self.includes(id))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorstCase {
    pub trial: usize,
    pub exponent: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs - rhs` oriented so that negative means violated.
    pub oriented_margin: f64,
    /// Oriented margin over `max(1, |lhs|, |rhs|)`; ranks the cases.
    pub relative_margin: f64,
    pub block: Vec<usize>,
    pub coefficients: WClassCoefficients,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct IdStats {
    pub evaluated: u64,
    pub applicable: u64,
    pub satisfied: u64,
    pub violated: u64,
    pub worst: Option<WorstCase>,
}

impl IdStats {
    fn merge(&mut self, other: IdStats) {
        self.evaluated += other.evaluated;
        self.applicable += other.applicable;
        self.satisfied += other.satisfied;
        self.violated += other.violated;
        if let Some(w) = other.worst {
            if self.worst.as_ref().is_none_or(|cur| worse(&w, cur)) {
                self.worst = Some(w);
            }
        }
    }
}

fn worse(a: &WorstCase, b: &WorstCase) -> bool {
    a.relative_margin
        .total_cmp(&b.relative_margin)
        .then(a.trial.cmp(&b.trial))
        .is_lt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct FuzzSummary {
    pub seed: u64,
    pub trials: usize,
    pub stats: BTreeMap<InequalityId, IdStats>,
    /// Split and ordered bounds re-evaluated with hypotheses read pairwise
    /// (each pair against the next pair). Informational only.
    pub pairwise_stats: BTreeMap<InequalityId, IdStats>,
    pub dominance_checked: u64,
    pub dominance_failures: u64,
    /// Spin-flip pair concurrence against the closed form.
    pub max_pair_closed_deviation: f64,
    /// Pure-state concurrence of the full block against the closed form.
    pub max_block_closed_deviation: f64,
    /// Largest spread among C, C_a, N_c and N_a on one pair reduction.
    pub max_measure_identity_deviation: f64,
    pub max_ckw_deviation: f64,
    pub oracle_checks: u64,
    /// Largest `|oracle - closed form|` on sub-block reductions.
    pub oracle_max_deviation: f64,
    /// Smallest signed `oracle_min - closed form`; a minimization oracle
    /// should never land below the true value.
    pub oracle_min_signed: f64,
    pub evaluation_errors: u64,
    pub first_error: Option<String>,
}

impl FuzzSummary {
    fn empty(ids: &[InequalityId], seed: u64, trials: usize) -> Self {
        let stats: BTreeMap<_, _> = ids.iter().map(|&id| (id, IdStats::default())).collect();
        let pairwise_stats = ids
            .iter()
            .filter(|id| PAIRWISE_IDS.contains(id))
            .map(|&id| (id, IdStats::default()))
            .collect();
        FuzzSummary {
            seed,
            trials,
            stats,
            pairwise_stats,
            dominance_checked: 0,
            dominance_failures: 0,
            max_pair_closed_deviation: 0.0,
            max_block_closed_deviation: 0.0,
            max_measure_identity_deviation: 0.0,
            max_ckw_deviation: 0.0,
            oracle_checks: 0,
            oracle_max_deviation: 0.0,
            oracle_min_signed: f64::INFINITY,
            evaluation_errors: 0,
            first_error: None,
        }
    }

    fn merge(mut self, other: FuzzSummary) -> FuzzSummary {
        for (id, s) in other.stats {
            self.stats.entry(id).or_default().merge(s);
        }
        for (id, s) in other.pairwise_stats {
            self.pairwise_stats.entry(id).or_default().merge(s);
        }
        self.dominance_checked += other.dominance_checked;
        self.dominance_failures += other.dominance_failures;
        self.max_pair_closed_deviation = self
            .max_pair_closed_deviation
            .max(other.max_pair_closed_deviation);
        self.max_block_closed_deviation = self
            .max_block_closed_deviation
            .max(other.max_block_closed_deviation);
        self.max_measure_identity_deviation = self
            .max_measure_identity_deviation
            .max(other.max_measure_identity_deviation);
        self.max_ckw_deviation = self.max_ckw_deviation.max(other.max_ckw_deviation);
        self.oracle_checks += other.oracle_checks;
        self.oracle_max_deviation = self.oracle_max_deviation.max(other.oracle_max_deviation);
        self.oracle_min_signed = self.oracle_min_signed.min(other.oracle_min_signed);
        self.evaluation_errors += other.evaluation_errors;
        // errors carry no trial index; keep the lexicographically first for determinism
        self.first_error = match (self.first_error, other.first_error) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self
    }

    pub fn total_violations(&self) -> u64 {
        self.stats.values().map(|s| s.violated).sum()
    }

    /// No violation, no dominance failure and no evaluation error.
    pub fn is_clean(&self) -> bool {
        self.total_violations() == 0 && self.dominance_failures == 0 && self.evaluation_errors == 0
    }
}

const PAIRWISE_IDS: [InequalityId; 6] = [
    InequalityId::Th1,
    InequalityId::Th2,
    InequalityId::Th4,
    InequalityId::Th5,
    InequalityId::Lem3,
    InequalityId::Eq2,
];

pub fn run_fuzz(cfg: &FuzzConfig) -> Result<FuzzSummary> {
    cfg.validate()?;
    let ids = cfg.selected_ids();
    let summary = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| run_trial(cfg, &ids, trial))
        .reduce(
            || FuzzSummary::empty(&ids, cfg.seed, cfg.trials),
            FuzzSummary::merge,
        );
    Ok(summary)
}

struct Trial<'a> {
    cfg: &'a FuzzConfig,
    index: usize,
    coefficients: WClassCoefficients,
    out: FuzzSummary,
}

struct BlockCtx<'a> {
    block: &'a SubsystemSelection,
}

impl Trial<'_> {
    fn fail(&mut self, e: Error) {
        self.out.evaluation_errors += 1;
        let msg = format!("trial {}: {e}", self.index);
        if self.out.first_error.as_ref().is_none_or(|cur| msg < *cur) {
            self.out.first_error = Some(msg);
        }
    }

    fn emit(&mut self, ctx: &BlockCtx, report: Result<InequalityReport>, pairwise: bool) {
        let report = match report {
            Ok(r) => r,
            Err(e) => return self.fail(e),
        };
        let id = report.id;
        if !pairwise {
            self.dominance(ctx, &report);
        }
        let table = if pairwise {
            &mut self.out.pairwise_stats
        } else {
            &mut self.out.stats
        };
        let Some(stats) = table.get_mut(&id) else {
            return;
        };
        stats.evaluated += 1;
        let Some(ok) = report.satisfied else { return };
        stats.applicable += 1;
        if ok {
            stats.satisfied += 1;
        } else {
            stats.violated += 1;
        }
        let scale = 1f64.max(report.lhs.abs()).max(report.rhs.abs());
        let oriented = report.oriented_margin();
        let relative = if oriented.is_nan() {
            f64::NEG_INFINITY
        } else {
            oriented / scale
        };
        if stats
            .worst
            .as_ref()
            .is_none_or(|w| relative < w.relative_margin)
        {
            stats.worst = Some(WorstCase {
                trial: self.index,
                exponent: report.exponent,
                lhs: report.lhs,
                rhs: report.rhs,
                oriented_margin: oriented,
                relative_margin: relative,
                block: ctx.block.indices().to_vec(),
                coefficients: self.coefficients.clone(),
            });
        }
    }

    /// New bounds never fall below the ones they refine.
    fn dominance(&mut self, ctx: &BlockCtx, r: &InequalityReport) {
        if r.satisfied.is_none() {
            return;
        }
        let Some(base) = r.baseline_rhs else { return };
        let slack = Tolerances::DEFAULT.report_slack * 1f64.max(r.rhs.abs()).max(base.abs());
        let ok = match r.id {
            InequalityId::Th1 | InequalityId::Th2 => {
                r.rhs >= base - slack && (r.exponent != 2.0 || (r.rhs - base).abs() <= slack)
            }
            InequalityId::Th3 => r.rhs == base / (ctx.block.m() - 1) as f64,
            _ => return,
        };
        self.out.dominance_checked += 1;
        if !ok {
            self.out.dominance_failures += 1;
        }
    }
}

fn run_trial(cfg: &FuzzConfig, ids: &[InequalityId], index: usize) -> FuzzSummary {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index as u64);
    let n = rng.random_range(cfg.min_qubits..=cfg.max_qubits);
    let coefficients = sample_with_zeros(cfg, n, &mut rng);
    let mut trial = Trial {
        cfg,
        index,
        coefficients,
        out: FuzzSummary::empty(ids, cfg.seed, 1),
    };
    if let Err(e) = evaluate_trial(&mut trial, &mut rng) {
        trial.fail(e);
    }
    trial.out
}

fn sample_with_zeros(cfg: &FuzzConfig, n: usize, rng: &mut ChaCha8Rng) -> WClassCoefficients {
    let c = sample_wclass(n, rng).expect("n >= 2");
    let mut b = c.b().to_vec();
    let zero = Complex64::new(0.0, 0.0);
    if rng.random_bool(cfg.zero_probability) {
        let k = rng.random_range(1..n);
        b[k] = zero;
    }
    if rng.random_bool(cfg.zero_a_probability) {
        b[0] = zero;
    }
    WClassCoefficients::normalized(c.a(), b).expect("nonzero amplitudes remain")
}

fn blocks_for(cfg: &FuzzConfig, n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<SubsystemSelection>> {
    let qubits: Vec<usize> = (1..n).collect();
    let mut out = Vec::new();
    if n <= ENUMERATE_ALL_UP_TO {
        fn arrange(
            rest: &[usize],
            prefix: &mut Vec<usize>,
            n: usize,
            out: &mut Vec<SubsystemSelection>,
        ) -> Result<()> {
            for (i, &q) in rest.iter().enumerate() {
                prefix.push(q);
                out.push(SubsystemSelection::new(n, prefix.clone())?);
                let mut remaining = rest.to_vec();
                remaining.remove(i);
                arrange(&remaining, prefix, n, out)?;
                prefix.pop();
            }
            Ok(())
        }
        arrange(&qubits, &mut Vec::new(), n, &mut out)?;
    } else {
        out.push(SubsystemSelection::full(n)?);
        for _ in 0..cfg.random_blocks {
            let size = rng.random_range(1..n);
            let mut pool = qubits.clone();
            let (chosen, _) = pool.partial_shuffle(rng, size);
            out.push(SubsystemSelection::new(n, chosen.to_vec())?);
        }
    }
    Ok(out)
}

struct PairValues {
    c: Vec<f64>,
    ca: Vec<f64>,
    nc: Vec<f64>,
    na: Vec<f64>,
}

fn evaluate_trial(trial: &mut Trial, rng: &mut ChaCha8Rng) -> Result<()> {
    let cfg = trial.cfg;
    let c = trial.coefficients.clone();
    let n = c.n_qubits();
    // index j holds the values of pair (A, B_j); index 0 unused
    let mut pv = PairValues {
        c: vec![0.0; n],
        ca: vec![0.0; n],
        nc: vec![0.0; n],
        na: vec![0.0; n],
    };
    let mut ckw_pairs = 0.0;
    for j in 1..n {
        let rho = reduce(&c, &SubsystemSelection::new(n, vec![j])?)?;
        pv.c[j] = concurrence_two_qubit(&rho)?;
        pv.ca[j] = coa_two_qubit(&rho)?;
        pv.nc[j] = cren_two_qubit(&rho)?;
        pv.na[j] = crenoa_two_qubit(&rho)?;
        let closed = pair_concurrence_closed(&c, j)?;
        let out = &mut trial.out;
        out.max_pair_closed_deviation = out.max_pair_closed_deviation.max((pv.c[j] - closed).abs());
        let vals = [pv.c[j], pv.ca[j], pv.nc[j], pv.na[j]];
        let spread = vals.iter().cloned().fold(f64::MIN, f64::max)
            - vals.iter().cloned().fold(f64::MAX, f64::min);
        out.max_measure_identity_deviation = out.max_measure_identity_deviation.max(spread);
        ckw_pairs += pv.c[j] * pv.c[j];
    }

    let psi = build_state(&c);
    let cut = Bipartition::first_vs_rest(n)?;
    let full_c = concurrence_pure(&psi, &cut)?;
    let full_n = negativity_pure(&psi, &cut)?;
    let full_closed = block_concurrence_closed(&c, &SubsystemSelection::full(n)?)?;
    trial.out.max_block_closed_deviation = (full_c - full_closed)
        .abs()
        .max((full_n - full_closed).abs());
    trial.out.max_ckw_deviation = (full_c * full_c - ckw_pairs).abs();

    let blocks = blocks_for(cfg, n, rng)?;
    for block in &blocks {
        evaluate_block(trial, &pv, block, full_c, full_n)?;
    }

    if trial.index < cfg.oracle_trials && n >= 3 {
        let size = rng.random_range(1..n - 1);
        let mut pool: Vec<usize> = (1..n).collect();
        let (chosen, _) = pool.partial_shuffle(rng, size);
        let sel = SubsystemSelection::new(n, chosen.to_vec())?;
        let rho = reduce(&c, &sel)?;
        let closed = block_concurrence_closed(&c, &sel)?;
        for objective in [Objective::Min, Objective::Max] {
            let res = convex_roof_oracle(
                &rho,
                objective,
                OracleMeasure::Concurrence,
                cfg.oracle_budget,
                rng,
            )?;
            let dev = res.value - closed;
            let out = &mut trial.out;
            out.oracle_checks += 1;
            out.oracle_max_deviation = out.oracle_max_deviation.max(dev.abs());
            if objective == Objective::Min {
                out.oracle_min_signed = out.oracle_min_signed.min(dev);
            }
        }
    }
    Ok(())
}

fn count_zeros(v: &[f64]) -> usize {
    v.iter()
        .filter(|&&x| x <= Tolerances::DEFAULT.zero_value)
        .count()
}

fn evaluate_block(
    trial: &mut Trial,
    pv: &PairValues,
    block: &SubsystemSelection,
    full_c: f64,
    full_n: f64,
) -> Result<()> {
    use InequalityId::*;
    let cfg = trial.cfg;
    let wb = cfg.weight_base;
    let c = &trial.coefficients;
    let pick = |src: &[f64]| -> Vec<f64> { block.indices().iter().map(|&j| src[j]).collect() };
    let (cv, ca, nc, na) = (pick(&pv.c), pick(&pv.ca), pick(&pv.nc), pick(&pv.na));
    let downstream = (1..block.indices().len())
        .map(|pos| block_concurrence_closed(c, &block.tail(pos).expect("pos < len")))
        .collect::<Result<Vec<_>>>()?;
    let conc_profile = OrderingProfile::from_values(cv.clone(), downstream.clone())?;
    let neg_profile = OrderingProfile::from_values(nc.clone(), downstream)?;
    let full = block.is_full();
    let closed = block_concurrence_closed(c, block)?;
    // assistance LHS: exact on the full block; on sub-blocks the block
    // concurrence, which bounds the assistance value from below
    let lhs = if full { full_c } else { closed };
    let lhs_neg = if full { full_n } else { closed };
    let ctx = BlockCtx { block };
    let mark =
        |r: Result<InequalityReport>| r.map(|r| if full { r } else { r.mark_lhs_lower_bound() });
    let conc_pairwise = OrderingProfile {
        flags: conc_profile.pairwise.clone(),
        ..conc_profile.clone()
    };
    let neg_pairwise = OrderingProfile {
        flags: neg_profile.pairwise.clone(),
        ..neg_profile.clone()
    };

    for &x in &cfg.x_grid {
        if cfg.includes(Eq4) {
            trial.emit(&ctx, mark(coa_lower_eq4(&ca, x, lhs)), false);
        }
        if cfg.includes(Th1) {
            if let Some(t) = conc_profile.flags.t {
                trial.emit(
                    &ctx,
                    mark(split_bound(Th1, &ca, &conc_profile, t, x, lhs, wb)),
                    false,
                );
            }
            if let Some(t) = conc_pairwise.flags.t {
                trial.emit(
                    &ctx,
                    split_bound(Th1, &ca, &conc_pairwise, t, x, lhs, wb),
                    true,
                );
            }
        }
        if cfg.includes(Th2) {
            trial.emit(
                &ctx,
                mark(ordered_bound(Th2, &ca, &conc_profile, x, lhs, wb)),
                false,
            );
            trial.emit(
                &ctx,
                ordered_bound(Th2, &ca, &conc_pairwise, x, lhs, wb),
                true,
            );
        }
        if cfg.includes(Th4) {
            if let Some(t) = neg_profile.flags.t {
                trial.emit(
                    &ctx,
                    mark(split_bound(Th4, &na, &neg_profile, t, x, lhs_neg, wb)),
                    false,
                );
            }
            if let Some(t) = neg_pairwise.flags.t {
                trial.emit(
                    &ctx,
                    split_bound(Th4, &na, &neg_pairwise, t, x, lhs_neg, wb),
                    true,
                );
            }
        }
        if cfg.includes(Th5) {
            trial.emit(
                &ctx,
                mark(ordered_bound(Th5, &na, &neg_profile, x, lhs_neg, wb)),
                false,
            );
            trial.emit(
                &ctx,
                ordered_bound(Th5, &na, &neg_pairwise, x, lhs_neg, wb),
                true,
            );
        }
        if full {
            if cfg.includes(Lem2) {
                trial.emit(&ctx, neg_lower_lemma2(&nc, x, full_n), false);
            }
            if cfg.includes(Lem3) {
                if let Some(t) = neg_profile.flags.t {
                    trial.emit(
                        &ctx,
                        split_bound(Lem3, &nc, &neg_profile, t, x, full_n, wb),
                        false,
                    );
                }
                if let Some(t) = neg_pairwise.flags.t {
                    trial.emit(
                        &ctx,
                        split_bound(Lem3, &nc, &neg_pairwise, t, x, full_n, wb),
                        true,
                    );
                }
            }
            if cfg.includes(Eq2) {
                if let Some(t) = conc_profile.flags.t {
                    trial.emit(
                        &ctx,
                        split_bound(Eq2, &cv, &conc_profile, t, x, full_c, wb),
                        false,
                    );
                }
                if let Some(t) = conc_pairwise.flags.t {
                    trial.emit(
                        &ctx,
                        split_bound(Eq2, &cv, &conc_pairwise, t, x, full_c, wb),
                        true,
                    );
                }
            }
        }
    }

    let ca_zeros = count_zeros(&ca);
    let na_zeros = count_zeros(&na);
    for &y in &cfg.y_grid {
        if cfg.includes(Eq5) {
            trial.emit(&ctx, mark(coa_upper_eq5(&ca, y, lhs)), false);
        }
        if ca_zeros == 0 && cfg.includes(Th3) {
            trial.emit(&ctx, mark(coa_upper_th3(&ca, y, lhs)), false);
        }
        if ca_zeros == 1 && cfg.includes(Remark1) {
            trial.emit(&ctx, mark(remark_cyclic(&ca, y, lhs)), false);
        }
        if na_zeros == 0 && cfg.includes(Th6) {
            trial.emit(&ctx, mark(crenoa_th6(&na, y, lhs_neg)), false);
        }
        if na_zeros == 1 && cfg.includes(Remark2) {
            trial.emit(&ctx, mark(crenoa_remark_cyclic(&na, y, lhs_neg)), false);
        }
        if full {
            if cfg.includes(Lem4) {
                trial.emit(&ctx, neg_upper_lemma4(&nc, y, full_n), false);
            }
            if cfg.includes(Eq3) {
                trial.emit(&ctx, concurrence_upper_eq3(&cv, y, full_c), false);
            }
        }
    }
    Ok(())
}
