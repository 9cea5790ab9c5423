use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wmono_core::measures::{
    coa_two_qubit, concurrence_two_qubit, cren_two_qubit, crenoa_two_qubit,
};
use wmono_core::qlinalg::DimList;
use wmono_core::verify::{
    convex_roof_oracle, random_density_matrix, sample_wclass, Objective, OracleBudget,
    OracleMeasure,
};
use wmono_core::wclass::{block_concurrence_closed, reduce, SubsystemSelection};
use wmono_core::DensityMatrix;

use crate::output::num;
use crate::{CliError, OracleArgs};

/// Allowed excess of the oracle past the closed form on its one-sided side.
const ONE_SIDED_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleTarget {
    Concurrence,
    Coa,
    Cren,
    Crenoa,
    /// Proper sub-block reductions of random W-class states.
    WBlock,
}

impl OracleTarget {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        Ok(match s {
            "concurrence" => OracleTarget::Concurrence,
            "coa" => OracleTarget::Coa,
            "cren" => OracleTarget::Cren,
            "crenoa" => OracleTarget::Crenoa,
            "wblock" => OracleTarget::WBlock,
            other => {
                return Err(CliError::Usage(format!(
                    "unsupported measure '{other}' (concurrence, coa, cren, crenoa, wblock)"
                )))
            }
        })
    }

    fn objective(self) -> (Objective, OracleMeasure) {
        match self {
            OracleTarget::Concurrence | OracleTarget::WBlock => {
                (Objective::Min, OracleMeasure::Concurrence)
            }
            OracleTarget::Coa => (Objective::Max, OracleMeasure::Concurrence),
            OracleTarget::Cren => (Objective::Min, OracleMeasure::Negativity),
            OracleTarget::Crenoa => (Objective::Max, OracleMeasure::Negativity),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleStats {
    pub trials: usize,
    /// Largest `|closed form - oracle|`.
    pub max_deviation: f64,
    /// Largest step of the oracle past the closed form in the direction it
    /// cannot legitimately go (below for minima, above for maxima).
    pub max_one_sided: f64,
}

fn sample_input(
    target: OracleTarget,
    rank: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(DensityMatrix, f64), CliError> {
    if target == OracleTarget::WBlock {
        let n = rng.random_range(3..=6);
        let c = sample_wclass(n, rng)?;
        let size = rng.random_range(1..n - 1);
        let mut pool: Vec<usize> = (1..n).collect();
        rand::seq::SliceRandom::shuffle(pool.as_mut_slice(), rng);
        pool.truncate(size);
        let sel = SubsystemSelection::new(n, pool)?;
        return Ok((reduce(&c, &sel)?, block_concurrence_closed(&c, &sel)?));
    }
    let rho = random_density_matrix(DimList::qubits(2)?, rank, rng)?;
    let closed = match target {
        OracleTarget::Concurrence => concurrence_two_qubit(&rho)?,
        OracleTarget::Coa => coa_two_qubit(&rho)?,
        OracleTarget::Cren => cren_two_qubit(&rho)?,
        _ => crenoa_two_qubit(&rho)?,
    };
    Ok((rho, closed))
}

pub fn oracle_stats(
    target: OracleTarget,
    rank: usize,
    budget: OracleBudget,
    trials: usize,
    seed: u64,
) -> Result<OracleStats, CliError> {
    if !(1..=4).contains(&rank) {
        return Err(CliError::Usage(format!(
            "rank must lie in 1..=4, got {rank}"
        )));
    }
    let (objective, measure) = target.objective();
    let mut stats = OracleStats {
        trials,
        max_deviation: 0.0,
        max_one_sided: f64::NEG_INFINITY,
    };
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial as u64);
        let (rho, closed) = sample_input(target, rank, &mut rng)?;
        let found = convex_roof_oracle(&rho, objective, measure, budget, &mut rng)?.value;
        let excess = match objective {
            Objective::Min => closed - found,
            Objective::Max => found - closed,
        };
        stats.max_deviation = stats.max_deviation.max((found - closed).abs());
        stats.max_one_sided = stats.max_one_sided.max(excess);
    }
    Ok(stats)
}

pub fn cmd_oracle(args: &OracleArgs, out: &mut dyn Write) -> Result<bool, CliError> {
    let target = OracleTarget::parse(&args.measure)?;
    if args.trials == 0 {
        return Err(CliError::Usage("trials must be at least 1".into()));
    }
    let budget = OracleBudget {
        starts: args.budget,
        refine_steps: args.refine,
        ..OracleBudget::default()
    };
    let s = oracle_stats(target, args.rank, budget, args.trials, args.seed)?;
    let rank = if target == OracleTarget::WBlock {
        "<=2".to_string()
    } else {
        args.rank.to_string()
    };
    writeln!(
        out,
        "{:<12} {:>5} {:>7} {:>16} {:>16}",
        "measure", "rank", "trials", "max |dev|", "max one-sided"
    )?;
    writeln!(
        out,
        "{:<12} {:>5} {:>7} {:>16} {:>16}",
        args.measure,
        rank,
        s.trials,
        num(s.max_deviation),
        num(s.max_one_sided)
    )?;
    Ok(s.max_one_sided <= ONE_SIDED_SLACK)
}
