use std::io::Write;

use wmono_core::monogamy::WeightBase;
use wmono_core::verify::{run_fuzz, FuzzConfig, FuzzSummary, IdStats, OracleBudget};

use crate::output::{num, write_atomic};
use crate::{CliError, VerifyArgs};

pub fn config_from_args(args: &VerifyArgs) -> FuzzConfig {
    FuzzConfig {
        seed: args.seed,
        trials: args.trials,
        min_qubits: args.min_qubits,
        max_qubits: args.max_qubits,
        x_grid: args.x_grid.clone(),
        y_grid: args.y_grid.clone(),
        ids: (!args.ids.is_empty()).then(|| args.ids.clone()),
        oracle_budget: OracleBudget {
            starts: args.oracle_budget,
            ..OracleBudget::default()
        },
        oracle_trials: args.oracle_trials,
        weight_base: if args.corrupt_weights {
            WeightBase::Exponent
        } else {
            WeightBase::HalfExponent
        },
        ..FuzzConfig::default()
    }
}

fn worst_cells(s: &IdStats) -> [String; 4] {
    match &s.worst {
        Some(w) => [
            num(w.relative_margin),
            num(w.oriented_margin),
            w.trial.to_string(),
            num(w.exponent),
        ],
        None => Default::default(),
    }
}

pub fn write_table(out: &mut dyn Write, s: &FuzzSummary) -> std::io::Result<()> {
    writeln!(out, "seed {}  trials {}", s.seed, s.trials)?;
    writeln!(
        out,
        "{:<8} {:>10} {:>10} {:>10} {:>8}  {:>16} {:>7}",
        "id", "evaluated", "applicable", "satisfied", "violated", "worst rel.margin", "trial"
    )?;
    let row = |out: &mut dyn Write, id: &str, st: &IdStats| {
        let [rel, _, trial, _] = worst_cells(st);
        writeln!(
            out,
            "{:<8} {:>10} {:>10} {:>10} {:>8}  {:>16} {:>7}",
            id, st.evaluated, st.applicable, st.satisfied, st.violated, rel, trial
        )
    };
    for (id, st) in &s.stats {
        row(out, id.as_str(), st)?;
    }
    if !s.pairwise_stats.is_empty() {
        writeln!(
            out,
            "\npairwise hypothesis reading (informational, not gated):"
        )?;
        for (id, st) in &s.pairwise_stats {
            row(out, id.as_str(), st)?;
        }
    }
    writeln!(out)?;
    writeln!(
        out,
        "dominance checks          {} ({} failed)",
        s.dominance_checked, s.dominance_failures
    )?;
    writeln!(
        out,
        "pair closed-form dev      {}",
        num(s.max_pair_closed_deviation)
    )?;
    writeln!(
        out,
        "full-block closed-form dev {}",
        num(s.max_block_closed_deviation)
    )?;
    writeln!(
        out,
        "C = Ca = Nc = Na spread   {}",
        num(s.max_measure_identity_deviation)
    )?;
    writeln!(
        out,
        "CKW saturation dev        {}",
        num(s.max_ckw_deviation)
    )?;
    if s.oracle_checks > 0 {
        writeln!(
            out,
            "oracle checks             {} (max |dev| {}, min signed {})",
            s.oracle_checks,
            num(s.oracle_max_deviation),
            num(s.oracle_min_signed)
        )?;
    }
    if s.evaluation_errors > 0 {
        writeln!(
            out,
            "evaluation errors         {} (first: {})",
            s.evaluation_errors,
            s.first_error.as_deref().unwrap_or("")
        )?;
    }
    for (id, st) in &s.stats {
        if st.violated > 0 {
            if let Some(w) = &st.worst {
                writeln!(
                    out,
                    "worst {id}: trial {} exponent {} block {:?} lhs {} rhs {} a {} b {:?}",
                    w.trial,
                    num(w.exponent),
                    w.block,
                    num(w.lhs),
                    num(w.rhs),
                    w.coefficients.a(),
                    w.coefficients.b()
                )?;
            }
        }
    }
    writeln!(out, "total violations          {}", s.total_violations())
}

/// One row per inequality id.
pub fn write_csv(w: &mut dyn Write, s: &FuzzSummary) -> Result<(), CliError> {
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record([
        "id",
        "evaluated",
        "applicable",
        "satisfied",
        "violated",
        "worst_relative_margin",
        "worst_margin",
        "worst_trial",
        "worst_exponent",
    ])?;
    for (id, st) in &s.stats {
        let [rel, abs, trial, exp] = worst_cells(st);
        csv.write_record([
            id.as_str().to_string(),
            st.evaluated.to_string(),
            st.applicable.to_string(),
            st.satisfied.to_string(),
            st.violated.to_string(),
            rel,
            abs,
            trial,
            exp,
        ])?;
    }
    csv.flush()?;
    Ok(())
}

pub fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<bool, CliError> {
    let cfg = config_from_args(args);
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let summary = run_fuzz(&cfg)?;
    write_table(out, &summary)?;
    match &args.csv {
        Some(path) => write_atomic(path, |w| write_csv(w, &summary))?,
        None => {
            writeln!(out)?;
            write_csv(out, &summary)?;
        }
    }
    Ok(summary.is_clean())
}
