use std::io::Write;

use wmono_core::measures::{
    coa_two_qubit, concurrence_pure, concurrence_two_qubit, cren_two_qubit, crenoa_two_qubit,
    negativity_pure, Bipartition,
};
use wmono_core::monogamy::{self, Direction, InequalityId, InequalityReport, OrderingProfile};
use wmono_core::wclass::{
    block_concurrence_closed, build_state, reduce, SubsystemSelection, WClassCoefficients,
};
use wmono_core::{Error, Tolerances};

use crate::output::num;
use crate::statefile::parse_state;
use crate::{CliError, EvaluateArgs};

/// Everything the evaluators need for one state and one ordered block,
/// computed once from the state vector.
#[derive(Debug, Clone)]
pub struct EvalContext {
    pub block: SubsystemSelection,
    /// Pair values in block order.
    pub c: Vec<f64>,
    pub ca: Vec<f64>,
    pub nc: Vec<f64>,
    pub na: Vec<f64>,
    /// One-to-group concurrence and negativity of A against the block.
    pub lhs_c: f64,
    pub lhs_n: f64,
    /// False when the block is a proper sub-block and the assistance LHS is
    /// the block concurrence (a lower bound on it).
    pub lhs_exact: bool,
    pub conc_profile: OrderingProfile,
    pub neg_profile: OrderingProfile,
}

impl EvalContext {
    pub fn new(c: &WClassCoefficients, block: &SubsystemSelection) -> Result<Self, Error> {
        let n = c.n_qubits();
        let mut v = [Vec::new(), Vec::new(), Vec::new(), Vec::new()];
        for &j in block.indices() {
            let rho = reduce(c, &SubsystemSelection::new(n, vec![j])?)?;
            v[0].push(concurrence_two_qubit(&rho)?);
            v[1].push(coa_two_qubit(&rho)?);
            v[2].push(cren_two_qubit(&rho)?);
            v[3].push(crenoa_two_qubit(&rho)?);
        }
        let [cv, ca, nc, na] = v;
        let downstream = (1..block.indices().len())
            .map(|pos| block_concurrence_closed(c, &block.tail(pos).expect("pos < len")))
            .collect::<Result<Vec<_>, _>>()?;
        let (lhs_c, lhs_n) = if block.is_full() {
            let psi = build_state(c);
            let cut = Bipartition::first_vs_rest(n)?;
            (concurrence_pure(&psi, &cut)?, negativity_pure(&psi, &cut)?)
        } else {
            let v = block_concurrence_closed(c, block)?;
            (v, v)
        };
        Ok(EvalContext {
            block: block.clone(),
            conc_profile: OrderingProfile::from_values(cv.clone(), downstream.clone())?,
            neg_profile: OrderingProfile::from_values(nc.clone(), downstream)?,
            c: cv,
            ca,
            nc,
            na,
            lhs_c,
            lhs_n,
            lhs_exact: block.is_full(),
        })
    }

    /// Evaluates `id` at `exponent`. `t` overrides the split index chosen
    /// from the ordering profile. `Ok(Err(reason))` means the inequality
    /// does not apply to this input at all.
    pub fn evaluate(
        &self,
        id: InequalityId,
        exponent: f64,
        t: Option<usize>,
    ) -> Result<Result<InequalityReport, String>, Error> {
        use InequalityId::*;
        let zero = |v: &[f64]| {
            v.iter()
                .filter(|&&x| x <= Tolerances::DEFAULT.zero_value)
                .count()
        };
        let full_only = matches!(id, Lem2 | Lem3 | Lem4 | Eq2 | Eq3);
        if full_only && !self.block.is_full() {
            return Ok(Err(
                "stated for the full register; block is a proper subset".into(),
            ));
        }
        let pick_t = |profile: &OrderingProfile| -> Result<usize, String> {
            t.or(profile.flags.t).ok_or_else(|| {
                if profile.m() < 4 {
                    format!("needs m >= 4, block has m = {}", profile.m())
                } else {
                    "no split index satisfies the ordering hypotheses".into()
                }
            })
        };
        let mark = |r: InequalityReport| {
            let assisted = !matches!(id, Lem2 | Lem3 | Lem4 | Eq2 | Eq3);
            if assisted && !self.lhs_exact {
                r.mark_lhs_lower_bound()
            } else {
                r
            }
        };
        let report = match id {
            Th1 => match pick_t(&self.conc_profile) {
                Ok(t) => {
                    monogamy::coa_lower_th1(&self.ca, &self.conc_profile, t, exponent, self.lhs_c)?
                }
                Err(why) => return Ok(Err(why)),
            },
            Th2 => monogamy::coa_lower_th2(&self.ca, &self.conc_profile, exponent, self.lhs_c)?,
            Th3 => match zero(&self.ca) {
                0 => monogamy::coa_upper_th3(&self.ca, exponent, self.lhs_c)?,
                _ => return Ok(Err("a pair value vanishes; see remark1".into())),
            },
            Remark1 => match zero(&self.ca) {
                1 => monogamy::remark_cyclic(&self.ca, exponent, self.lhs_c)?,
                k => {
                    return Ok(Err(format!(
                        "needs exactly one vanishing pair value, found {k}"
                    )))
                }
            },
            Th4 => match pick_t(&self.neg_profile) {
                Ok(t) => {
                    monogamy::crenoa_th4(&self.na, &self.neg_profile, t, exponent, self.lhs_n)?
                }
                Err(why) => return Ok(Err(why)),
            },
            Th5 => monogamy::crenoa_th5(&self.na, &self.neg_profile, exponent, self.lhs_n)?,
            Th6 => match zero(&self.na) {
                0 => monogamy::crenoa_th6(&self.na, exponent, self.lhs_n)?,
                _ => return Ok(Err("a pair value vanishes; see remark2".into())),
            },
            Remark2 => match zero(&self.na) {
                1 => monogamy::crenoa_remark_cyclic(&self.na, exponent, self.lhs_n)?,
                k => {
                    return Ok(Err(format!(
                        "needs exactly one vanishing pair value, found {k}"
                    )))
                }
            },
            Lem2 => monogamy::neg_lower_lemma2(&self.nc, exponent, self.lhs_n)?,
            Lem3 => match pick_t(&self.neg_profile) {
                Ok(t) => monogamy::neg_lower_lemma3(
                    &self.nc,
                    &self.neg_profile,
                    t,
                    exponent,
                    self.lhs_n,
                )?,
                Err(why) => return Ok(Err(why)),
            },
            Lem4 => monogamy::neg_upper_lemma4(&self.nc, exponent, self.lhs_n)?,
            Eq2 => match pick_t(&self.conc_profile) {
                Ok(t) => monogamy::concurrence_lower_eq2(
                    &self.c,
                    &self.conc_profile,
                    t,
                    exponent,
                    self.lhs_c,
                )?,
                Err(why) => return Ok(Err(why)),
            },
            Eq3 => monogamy::concurrence_upper_eq3(&self.c, exponent, self.lhs_c)?,
            Eq4 => monogamy::coa_lower_eq4(&self.ca, exponent, self.lhs_c)?,
            Eq5 => monogamy::coa_upper_eq5(&self.ca, exponent, self.lhs_c)?,
        };
        Ok(Ok(mark(report)))
    }
}

pub fn write_report(out: &mut dyn Write, r: &InequalityReport) -> std::io::Result<()> {
    let sym = match r.direction() {
        Direction::AtLeast => ">=",
        Direction::Below => "<",
    };
    let var = var_name(r.id);
    writeln!(
        out,
        "[{}] {var} = {}  (lhs {sym} rhs)",
        r.id,
        num(r.exponent)
    )?;
    writeln!(out, "  lhs        = {}", num(r.lhs))?;
    writeln!(out, "  rhs        = {}", num(r.rhs))?;
    writeln!(out, "  margin     = {}", num(r.margin))?;
    if let Some(b) = r.baseline_rhs {
        writeln!(out, "  baseline   = {}", num(b))?;
    }
    if r.lhs_lower_bound {
        writeln!(
            out,
            "  note       : lhs is the block concurrence, a lower bound on the assistance value"
        )?;
    }
    if !r.hypotheses.is_empty() {
        let parts: Vec<String> = r
            .hypotheses
            .iter()
            .map(|h| format!("{}: {}", h.condition, if h.ok { "yes" } else { "no" }))
            .collect();
        writeln!(out, "  hypotheses : {}", parts.join("; "))?;
    }
    let holds = match r.direction() {
        Direction::AtLeast => r.margin >= 0.0,
        Direction::Below => r.margin < 0.0,
    };
    let status = match r.satisfied {
        Some(true) => "satisfied".to_string(),
        Some(false) => "VIOLATED".to_string(),
        None => format!(
            "hypotheses unmet (relation {} numerically)",
            if holds { "holds" } else { "fails" }
        ),
    };
    writeln!(out, "  status     : {status}")
}

pub fn cmd_evaluate(args: &EvaluateArgs, out: &mut dyn Write) -> Result<bool, CliError> {
    let text = std::fs::read_to_string(&args.file).map_err(|source| CliError::Io {
        path: args.file.clone(),
        source,
    })?;
    let spec = parse_state(&text)?;
    let ids: Vec<InequalityId> = if args.ids.is_empty() {
        InequalityId::ALL.to_vec()
    } else {
        args.ids.clone()
    };
    if let Some(x) = args.x.iter().find(|&&x| x.is_nan() || x < 2.0) {
        return Err(CliError::Usage(format!("--x value {x} is below 2")));
    }
    if let Some(y) = args.y.iter().find(|&&y| y.is_nan() || y >= 0.0) {
        return Err(CliError::Usage(format!("--y value {y} is not negative")));
    }
    let ctx = EvalContext::new(&spec.coefficients, &spec.block)?;
    writeln!(
        out,
        "state: {} qubits, block {:?} (m = {}), split {}",
        spec.coefficients.n_qubits(),
        spec.block.indices(),
        spec.block.m(),
        ctx.conc_profile.split()
    )?;
    writeln!(
        out,
        "C  (A|block) = {}   N  (A|block) = {}",
        num(ctx.lhs_c),
        num(ctx.lhs_n)
    )?;
    let fmt_list = |v: &[f64]| v.iter().map(|&x| num(x)).collect::<Vec<_>>().join(" ");
    writeln!(out, "C  pairs     = {}", fmt_list(&ctx.c))?;
    writeln!(out, "Ca pairs     = {}", fmt_list(&ctx.ca))?;
    writeln!(out, "Nc pairs     = {}", fmt_list(&ctx.nc))?;
    writeln!(out, "Na pairs     = {}", fmt_list(&ctx.na))?;

    let mut all_good = true;
    for id in ids {
        let grid = match id.direction() {
            Direction::AtLeast => &args.x,
            Direction::Below => &args.y,
        };
        for &e in grid {
            writeln!(out)?;
            match ctx.evaluate(id, e, spec.t)? {
                Ok(report) => {
                    if report.is_violation() {
                        all_good = false;
                    }
                    write_report(out, &report)?;
                }
                Err(why) => writeln!(
                    out,
                    "[{id}] {} = {}: not applicable: {why}",
                    var_name(id),
                    num(e)
                )?,
            }
        }
    }
    Ok(all_good)
}

fn var_name(id: InequalityId) -> &'static str {
    match id.direction() {
        Direction::AtLeast => "x",
        Direction::Below => "y",
    }
}
