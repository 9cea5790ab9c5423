//! The inequality catalog.
//!
//! Every evaluator takes the one-to-one values (pair concurrences or
//! negativities, in block order), the exponent and the unpowered one-to-group
//! value, and returns an [`InequalityReport`]. Hypotheses that fail are
//! recorded in the report and leave `satisfied` unset; they never turn into
//! errors. Errors are reserved for exponents outside an evaluator's domain and
//! for malformed inputs.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::tolerance::Tolerances;
use crate::wclass::{
    block_concurrence_closed, pair_concurrence_closed, SubsystemSelection, WClassCoefficients,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InequalityId {
    Th1,
    Th2,
    Th3,
    Th4,
    Th5,
    Th6,
    Lem2,
    Lem3,
    Lem4,
    Eq2,
    Eq3,
    Eq4,
    Eq5,
    Remark1,
    Remark2,
}

impl InequalityId {
    pub const ALL: [InequalityId; 15] = [
        InequalityId::Th1,
        InequalityId::Th2,
        InequalityId::Th3,
        InequalityId::Th4,
        InequalityId::Th5,
        InequalityId::Th6,
        InequalityId::Lem2,
        InequalityId::Lem3,
        InequalityId::Lem4,
        InequalityId::Eq2,
        InequalityId::Eq3,
        InequalityId::Eq4,
        InequalityId::Eq5,
        InequalityId::Remark1,
        InequalityId::Remark2,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            InequalityId::Th1 => "th1",
            InequalityId::Th2 => "th2",
            InequalityId::Th3 => "th3",
            InequalityId::Th4 => "th4",
            InequalityId::Th5 => "th5",
            InequalityId::Th6 => "th6",
            InequalityId::Lem2 => "lem2",
            InequalityId::Lem3 => "lem3",
            InequalityId::Lem4 => "lem4",
            InequalityId::Eq2 => "eq2",
            InequalityId::Eq3 => "eq3",
            InequalityId::Eq4 => "eq4",
            InequalityId::Eq5 => "eq5",
            InequalityId::Remark1 => "remark1",
            InequalityId::Remark2 => "remark2",
        }
    }

    pub fn direction(self) -> Direction {
        use InequalityId::*;
        match self {
            Th3 | Th6 | Lem4 | Eq3 | Eq5 | Remark1 | Remark2 => Direction::Below,
            _ => Direction::AtLeast,
        }
    }

    /// Index into [`InequalityId::ALL`].
    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for InequalityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InequalityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        InequalityId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown inequality id '{s}'")))
    }
}

/// `AtLeast`: `lhs >= rhs` (positive powers). `Below`: `lhs < rhs` (negative powers).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    AtLeast,
    Below,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    /// Pair value at this 1-based position dominates the downstream block value.
    PairAtLeastDownstream(usize),
    /// Pair value at this 1-based position is dominated by the downstream block value.
    PairAtMostDownstream(usize),
    /// No one-to-one value vanishes.
    NonzeroValues,
    /// The block holds at least two B qubits, so the strict bound has two terms to average.
    AtLeastTwoTerms,
    /// At least one nonvanishing value survives the zero removal.
    SurvivingTerm,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::PairAtLeastDownstream(i) => write!(f, "pair[{i}] >= downstream[{i}]"),
            Condition::PairAtMostDownstream(i) => write!(f, "pair[{i}] <= downstream[{i}]"),
            Condition::NonzeroValues => f.write_str("all values nonzero"),
            Condition::AtLeastTwoTerms => f.write_str("m >= 3"),
            Condition::SurvivingTerm => f.write_str("a nonzero value remains"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Hypothesis {
    pub condition: Condition,
    pub ok: bool,
}

/// One evaluation of one inequality.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityReport {
    pub id: InequalityId,
    pub exponent: f64,
    /// Left-hand side, already raised to the exponent.
    pub lhs: f64,
    pub rhs: f64,
    pub hypotheses: Vec<Hypothesis>,
    /// `None` when some hypothesis fails.
    pub satisfied: Option<bool>,
    /// `lhs - rhs`.
    pub margin: f64,
    /// The older bound this one tightens, where there is one.
    pub baseline_rhs: Option<f64>,
    /// Set when the assistance-measure LHS was evaluated through the block
    /// concurrence, which bounds it from below.
    pub lhs_lower_bound: bool,
}

impl InequalityReport {
    fn new(
        id: InequalityId,
        exponent: f64,
        lhs: f64,
        rhs: f64,
        hypotheses: Vec<Hypothesis>,
        baseline_rhs: Option<f64>,
    ) -> Self {
        let applicable = hypotheses.iter().all(|h| h.ok);
        let slack = Tolerances::DEFAULT.report_slack * 1f64.max(lhs.abs()).max(rhs.abs());
        let holds = match id.direction() {
            Direction::AtLeast => lhs >= rhs - slack,
            Direction::Below => lhs - rhs < slack,
        };
        InequalityReport {
            id,
            exponent,
            lhs,
            rhs,
            hypotheses,
            satisfied: applicable.then_some(holds),
            margin: lhs - rhs,
            baseline_rhs,
            lhs_lower_bound: false,
        }
    }

    pub fn direction(&self) -> Direction {
        self.id.direction()
    }

    pub fn hypotheses_hold(&self) -> bool {
        self.satisfied.is_some()
    }

    pub fn is_violation(&self) -> bool {
        self.satisfied == Some(false)
    }

    /// Margin oriented so that positive means "holds with room".
    pub fn oriented_margin(&self) -> f64 {
        match self.direction() {
            Direction::AtLeast => self.margin,
            Direction::Below => -self.margin,
        }
    }

    pub fn mark_lhs_lower_bound(mut self) -> Self {
        self.lhs_lower_bound = true;
        self
    }
}

/// Base of the geometric weights in the split bounds. `Exponent` replaces the
/// correct `x/2` with `x` and exists only to check that the fuzz harness
/// notices a wrong weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WeightBase {
    #[default]
    HalfExponent,
    Exponent,
}

impl WeightBase {
    fn base(self, x: f64) -> f64 {
        match self {
            WeightBase::HalfExponent => x / 2.0,
            WeightBase::Exponent => x,
        }
    }
}

/// Comparison pattern between each pair value and the block downstream of it.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderingFlags {
    /// `at_least[i]`: position `i + 1` satisfies the `>=` condition.
    pub at_least: Vec<bool>,
    pub at_most: Vec<bool>,
    /// Largest split `1 <= t <= m - 3` consistent with the flags.
    pub t: Option<usize>,
    pub all_ordered: bool,
}

impl OrderingFlags {
    fn from_comparisons(lhs: &[f64], rhs: &[f64]) -> Self {
        let tol = Tolerances::DEFAULT.zero_value;
        let at_least: Vec<bool> = lhs.iter().zip(rhs).map(|(p, d)| *p >= d - tol).collect();
        let at_most: Vec<bool> = lhs.iter().zip(rhs).map(|(p, d)| *p <= d + tol).collect();
        let positions = at_least.len();
        let all_ordered = at_least.iter().all(|&b| b);
        let t = (1..=positions.saturating_sub(1))
            .rev()
            .find(|&t| at_least[..t].iter().all(|&b| b) && at_most[t..].iter().all(|&b| b));
        OrderingFlags {
            at_least,
            at_most,
            t,
            all_ordered,
        }
    }

    /// Whether positions `1..=t` are `>=`-type and `t+1..=m-2` are `<=`-type.
    pub fn consistent_with(&self, t: usize) -> bool {
        t <= self.at_least.len()
            && self.at_least[..t].iter().all(|&b| b)
            && self.at_most[t..].iter().all(|&b| b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Split {
    /// `m = 2`, or `m = 3` without ordering: no position to split.
    Trivial,
    At(usize),
    AllOrdered,
    NoValid,
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Split::Trivial => f.write_str("trivial"),
            Split::At(t) => write!(f, "t={t}"),
            Split::AllOrdered => f.write_str("all-ordered"),
            Split::NoValid => f.write_str("no-valid-t"),
        }
    }
}

/// Hypothesis pattern of the split bounds for one ordered block.
///
/// The primary reading compares each pair value with the A|block value of
/// the B qubits after it. The pairwise reading compares it with the next pair
/// value only; it is reported for information and never gates a bound.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderingProfile {
    pub block: Option<SubsystemSelection>,
    pub pair_values: Vec<f64>,
    /// `downstream[i]`: value of A against the block after position `i + 1`.
    pub downstream: Vec<f64>,
    pub flags: OrderingFlags,
    pub pairwise: OrderingFlags,
}

impl OrderingProfile {
    pub fn from_values(pair_values: Vec<f64>, downstream: Vec<f64>) -> Result<Self> {
        if pair_values.is_empty() || downstream.len() + 1 != pair_values.len() {
            return Err(Error::InvalidInput(format!(
                "{} pair values need {} downstream values, got {}",
                pair_values.len(),
                pair_values.len().saturating_sub(1),
                downstream.len()
            )));
        }
        let flags = OrderingFlags::from_comparisons(&pair_values, &downstream);
        let pairwise = OrderingFlags::from_comparisons(&pair_values, &pair_values[1..]);
        Ok(OrderingProfile {
            block: None,
            pair_values,
            downstream,
            flags,
            pairwise,
        })
    }

    pub fn m(&self) -> usize {
        self.pair_values.len() + 1
    }

    pub fn split(&self) -> Split {
        if self.flags.all_ordered {
            Split::AllOrdered
        } else if let Some(t) = self.flags.t {
            Split::At(t)
        } else if self.m() < 4 {
            Split::Trivial
        } else {
            Split::NoValid
        }
    }
}

/// Ordering profile of `block` from the closed-form concurrences.
pub fn check_ordering(
    c: &WClassCoefficients,
    block: &SubsystemSelection,
) -> Result<OrderingProfile> {
    let pairs = block
        .indices()
        .iter()
        .map(|&j| pair_concurrence_closed(c, j))
        .collect::<Result<Vec<_>>>()?;
    let downstream = (1..block.indices().len())
        .map(|pos| block_concurrence_closed(c, &block.tail(pos).expect("pos < len")))
        .collect::<Result<Vec<_>>>()?;
    let mut profile = OrderingProfile::from_values(pairs, downstream)?;
    profile.block = Some(block.clone());
    Ok(profile)
}

fn require_lower(id: InequalityId, x: f64) -> Result<()> {
    if x >= 2.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::ExponentOutOfRange {
            id: id.as_str(),
            value: x,
            requirement: "x >= 2",
        })
    }
}

fn require_upper(id: InequalityId, y: f64) -> Result<()> {
    if y < 0.0 && y.is_finite() {
        Ok(())
    } else {
        Err(Error::ExponentOutOfRange {
            id: id.as_str(),
            value: y,
            requirement: "y < 0",
        })
    }
}

fn power_sum(values: &[f64], x: f64) -> f64 {
    values.iter().map(|v| v.powf(x)).sum()
}

fn is_zero(v: f64) -> bool {
    v <= Tolerances::DEFAULT.zero_value
}

/// Weights of the split bound for `n` values and split `t`:
/// `1, b, ..., b^{t-1}` for positions `1..=t`, `b^{t+1}` for `t+1..=n-1`,
/// and `b^t` for the last position.
pub fn split_weights(n: usize, t: usize, base: f64) -> Vec<f64> {
    (1..=n)
        .map(|i| {
            if i == n {
                base.powi(t as i32)
            } else if i <= t {
                base.powi(i as i32 - 1)
            } else {
                base.powi(t as i32 + 1)
            }
        })
        .collect()
}

/// Weights `1, b, b^2, ..., b^{n-1}` of the fully ordered bound.
pub fn ordered_weights(n: usize, base: f64) -> Vec<f64> {
    (0..n).map(|i| base.powi(i as i32)).collect()
}

fn weighted_power_sum(values: &[f64], weights: &[f64], x: f64) -> f64 {
    values.iter().zip(weights).map(|(v, w)| w * v.powf(x)).sum()
}

fn check_profile_len(values: &[f64], profile: &OrderingProfile) -> Result<()> {
    if values.len() != profile.pair_values.len() {
        return Err(Error::DimensionMismatch {
            expected: profile.pair_values.len(),
            found: values.len(),
        });
    }
    Ok(())
}

fn split_hypotheses(flags: &OrderingFlags, t: usize) -> Vec<Hypothesis> {
    let positions = flags.at_least.len();
    (1..=positions)
        .map(|i| {
            if i <= t {
                Hypothesis {
                    condition: Condition::PairAtLeastDownstream(i),
                    ok: flags.at_least[i - 1],
                }
            } else {
                Hypothesis {
                    condition: Condition::PairAtMostDownstream(i),
                    ok: flags.at_most[i - 1],
                }
            }
        })
        .collect()
}

pub(crate) fn split_bound(
    id: InequalityId,
    values: &[f64],
    profile: &OrderingProfile,
    t: usize,
    x: f64,
    lhs: f64,
    weights: WeightBase,
) -> Result<InequalityReport> {
    require_lower(id, x)?;
    check_profile_len(values, profile)?;
    let m = values.len() + 1;
    if m < 4 || t == 0 || t > m - 3 {
        return Err(Error::InvalidInput(format!(
            "{id}: split t={t} needs m >= 4 and 1 <= t <= m-3 (m = {m})"
        )));
    }
    let w = split_weights(values.len(), t, weights.base(x));
    let rhs = weighted_power_sum(values, &w, x);
    Ok(InequalityReport::new(
        id,
        x,
        lhs.powf(x),
        rhs,
        split_hypotheses(&profile.flags, t),
        Some(power_sum(values, x)),
    ))
}

pub(crate) fn ordered_bound(
    id: InequalityId,
    values: &[f64],
    profile: &OrderingProfile,
    x: f64,
    lhs: f64,
    weights: WeightBase,
) -> Result<InequalityReport> {
    require_lower(id, x)?;
    check_profile_len(values, profile)?;
    let w = ordered_weights(values.len(), weights.base(x));
    let rhs = weighted_power_sum(values, &w, x);
    let positions = profile.flags.at_least.len();
    Ok(InequalityReport::new(
        id,
        x,
        lhs.powf(x),
        rhs,
        split_hypotheses(&profile.flags, positions),
        Some(power_sum(values, x)),
    ))
}

/// `(1/(m-1)) sum v^y` with all values nonzero.
fn averaged_upper(
    id: InequalityId,
    values: &[f64],
    y: f64,
    lhs: f64,
    zero_is_error: bool,
) -> Result<InequalityReport> {
    require_upper(id, y)?;
    if values.is_empty() {
        return Err(Error::InvalidInput(format!("{id}: no values")));
    }
    let zero = values.iter().position(|&v| is_zero(v));
    if let (true, Some(position)) = (zero_is_error, zero) {
        return Err(Error::ZeroValue {
            position: position + 1,
        });
    }
    let baseline = power_sum(values, y);
    let rhs = baseline / values.len() as f64;
    let hypotheses = vec![
        Hypothesis {
            condition: Condition::NonzeroValues,
            ok: zero.is_none(),
        },
        Hypothesis {
            condition: Condition::AtLeastTwoTerms,
            ok: values.len() >= 2,
        },
    ];
    Ok(InequalityReport::new(
        id,
        y,
        lhs.powf(y),
        rhs,
        hypotheses,
        Some(baseline),
    ))
}

fn cyclic_upper(id: InequalityId, values: &[f64], y: f64, lhs: f64) -> Result<InequalityReport> {
    require_upper(id, y)?;
    let zeros = values.iter().filter(|&&v| is_zero(v)).count();
    if zeros != 1 {
        return Err(Error::InvalidInput(format!(
            "{id}: needs exactly one vanishing value, found {zeros}"
        )));
    }
    let kept: Vec<f64> = values.iter().copied().filter(|&v| !is_zero(v)).collect();
    let m = values.len() + 1;
    let baseline = power_sum(&kept, y);
    let rhs = baseline / (m - 1) as f64;
    let hypotheses = vec![Hypothesis {
        condition: Condition::SurvivingTerm,
        ok: !kept.is_empty(),
    }];
    Ok(InequalityReport::new(
        id,
        y,
        lhs.powf(y),
        rhs,
        hypotheses,
        Some(baseline),
    ))
}

/// Prior lower bound `sum C_a^x` on `C_a^x(A|block)`.
pub fn coa_lower_baseline(pairs: &[f64], x: f64) -> Result<f64> {
    require_lower(InequalityId::Eq4, x)?;
    Ok(power_sum(pairs, x))
}

/// `C_a^x(A|block) >= sum_i C_a^x(AB_i)`.
pub fn coa_lower_eq4(pairs: &[f64], x: f64, lhs: f64) -> Result<InequalityReport> {
    let rhs = coa_lower_baseline(pairs, x)?;
    Ok(InequalityReport::new(
        InequalityId::Eq4,
        x,
        lhs.powf(x),
        rhs,
        Vec::new(),
        None,
    ))
}

/// `C_a^y(A|block) < sum_i C_a^y(AB_i)`.
pub fn coa_upper_eq5(pairs: &[f64], y: f64, lhs: f64) -> Result<InequalityReport> {
    let id = InequalityId::Eq5;
    require_upper(id, y)?;
    let rhs = power_sum(pairs, y);
    let hypotheses = vec![
        Hypothesis {
            condition: Condition::NonzeroValues,
            ok: !pairs.iter().any(|&v| is_zero(v)),
        },
        Hypothesis {
            condition: Condition::AtLeastTwoTerms,
            ok: pairs.len() >= 2,
        },
    ];
    Ok(InequalityReport::new(
        id,
        y,
        lhs.powf(y),
        rhs,
        hypotheses,
        None,
    ))
}

/// Split lower bound on `C_a^x(A|block)` with split index `t`.
pub fn coa_lower_th1(
    pairs: &[f64],
    profile: &OrderingProfile,
    t: usize,
    x: f64,
    lhs: f64,
) -> Result<InequalityReport> {
    split_bound(
        InequalityId::Th1,
        pairs,
        profile,
        t,
        x,
        lhs,
        WeightBase::HalfExponent,
    )
}

/// Fully ordered lower bound `sum_i (x/2)^{i-1} C_a^x(AB_{j_i})`.
pub fn coa_lower_th2(
    pairs: &[f64],
    profile: &OrderingProfile,
    x: f64,
    lhs: f64,
) -> Result<InequalityReport> {
    ordered_bound(
        InequalityId::Th2,
        pairs,
        profile,
        x,
        lhs,
        WeightBase::HalfExponent,
    )
}

/// `C_a^y(A|block) < (1/(m-1)) sum_i C_a^y(AB_{j_i})`. A vanishing pair is an
/// error; such inputs go through [`remark_cyclic`].
pub fn coa_upper_th3(pairs: &[f64], y: f64, lhs: f64) -> Result<InequalityReport> {
    averaged_upper(InequalityId::Th3, pairs, y, lhs, true)
}

/// Zero-removal form of the averaged upper bound: `pairs` carries exactly one
/// vanishing value, which is dropped from the sum while the prefactor stays
/// `1/(m-1)` with `m = pairs.len() + 1`.
pub fn remark_cyclic(pairs: &[f64], y: f64, lhs: f64) -> Result<InequalityReport> {
    cyclic_upper(InequalityId::Remark1, pairs, y, lhs)
}

/// `N_c^x(A|B_1..B_{N-1}) >= sum_i N_c^x(AB_i)`; `lhs` is the unpowered `N_c`.
pub fn neg_lower_lemma2(values: &[f64], x: f64, lhs: f64) -> Result<InequalityReport> {
    let id = InequalityId::Lem2;
    require_lower(id, x)?;
    Ok(InequalityReport::new(
        id,
        x,
        lhs.powf(x),
        power_sum(values, x),
        Vec::new(),
        None,
    ))
}

/// Split lower bound over CREN values.
pub fn neg_lower_lemma3(
    values: &[f64],
    profile: &OrderingProfile,
    t: usize,
    x: f64,
    lhs: f64,
) -> Result<InequalityReport> {
    split_bound(
        InequalityId::Lem3,
        values,
        profile,
        t,
        x,
        lhs,
        WeightBase::HalfExponent,
    )
}

/// `N_c^x(A|rest) < (1/(N-1)) sum_i N_c^x(AB_i)` for `x < 0`.
pub fn neg_upper_lemma4(values: &[f64], x: f64, lhs: f64) -> Result<InequalityReport> {
    averaged_upper(InequalityId::Lem4, values, x, lhs, false)
}

/// Split lower bound over CRENOA values.
pub fn crenoa_th4(
    values: &[f64],
    profile: &OrderingProfile,
    t: usize,
    x: f64,
    lhs: f64,
) -> Result<InequalityReport> {
    split_bound(
        InequalityId::Th4,
        values,
        profile,
        t,
        x,
        lhs,
        WeightBase::HalfExponent,
    )
}

pub fn crenoa_th5(
    values: &[f64],
    profile: &OrderingProfile,
    x: f64,
    lhs: f64,
) -> Result<InequalityReport> {
    ordered_bound(
        InequalityId::Th5,
        values,
        profile,
        x,
        lhs,
        WeightBase::HalfExponent,
    )
}

pub fn crenoa_th6(values: &[f64], y: f64, lhs: f64) -> Result<InequalityReport> {
    averaged_upper(InequalityId::Th6, values, y, lhs, true)
}

/// Zero-removal form of [`crenoa_th6`].
pub fn crenoa_remark_cyclic(values: &[f64], y: f64, lhs: f64) -> Result<InequalityReport> {
    cyclic_upper(InequalityId::Remark2, values, y, lhs)
}

/// Split lower bound for concurrence itself (the bound the assistance
/// versions are built on).
pub fn concurrence_lower_eq2(
    values: &[f64],
    profile: &OrderingProfile,
    m_split: usize,
    alpha: f64,
    lhs: f64,
) -> Result<InequalityReport> {
    split_bound(
        InequalityId::Eq2,
        values,
        profile,
        m_split,
        alpha,
        lhs,
        WeightBase::HalfExponent,
    )
}

/// `C^alpha(A|rest) < K sum_i C^alpha(AB_i)` with `K = 1/(N-1)`, `alpha < 0`.
pub fn concurrence_upper_eq3(values: &[f64], alpha: f64, lhs: f64) -> Result<InequalityReport> {
    averaged_upper(InequalityId::Eq3, values, alpha, lhs, false)
}

/// Both prior concurrence bounds: the split lower bound at `alpha_lower >= 2`
/// and the averaged upper bound at `alpha_upper < 0`.
pub fn concurrence_baselines(
    values: &[f64],
    profile: &OrderingProfile,
    m_split: usize,
    alpha_lower: f64,
    alpha_upper: f64,
    lhs: f64,
) -> Result<(InequalityReport, InequalityReport)> {
    Ok((
        concurrence_lower_eq2(values, profile, m_split, alpha_lower, lhs)?,
        concurrence_upper_eq3(values, alpha_upper, lhs)?,
    ))
}
