//! `wmono`: evaluate monogamy bounds on W-class states, emit the example
//! figure data, run the randomized verification suite and cross-check
//! closed-form measures against the convex-roof oracle.
//!
//! Exit status: 0 success, 1 an applicable inequality is violated (or an
//! oracle bound is crossed), 2 usage or parse error.

pub mod evaluate;
pub mod figure;
pub mod oracle;
pub mod output;
pub mod statefile;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use wmono_core::monogamy::InequalityId;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Parse(#[from] statefile::ParseError),
    #[error(transparent)]
    Core(#[from] wmono_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("output: {0}")]
    Output(#[from] std::io::Error),
}

#[derive(Debug, Parser)]
#[command(
    name = "wmono",
    version,
    about = "Monogamy relations of assistance measures for W-class states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate inequalities on a state described in a file.
    Evaluate(EvaluateArgs),
    /// Write the example figure data as CSV.
    Figure(FigureArgs),
    /// Run the randomized soundness suite.
    Verify(VerifyArgs),
    /// Compare closed-form measures with the convex-roof oracle.
    Oracle(OracleArgs),
}

fn parse_id(s: &str) -> Result<InequalityId, String> {
    s.parse::<InequalityId>().map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// State file (`key = value` lines).
    pub file: PathBuf,
    /// Inequality ids, comma separated (default: all).
    #[arg(long, value_delimiter = ',', num_args = 1.., value_parser = parse_id)]
    pub ids: Vec<InequalityId>,
    /// Exponents for the lower bounds (x >= 2).
    #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true, default_values_t = [2.0, 3.0])]
    pub x: Vec<f64>,
    /// Exponents for the upper bounds (y < 0).
    #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true, default_values_t = [-1.0])]
    pub y: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// 1: lower bounds over x >= 2; 2: upper bounds over y < 0.
    #[arg(value_parser = clap::value_parser!(u8).range(1..=2))]
    pub which: u8,
    #[arg(long, allow_negative_numbers = true)]
    pub from: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub to: Option<f64>,
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, env = "WMONO_SEED", default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[arg(long, default_value_t = 3)]
    pub min_qubits: usize,
    #[arg(long, default_value_t = 6)]
    pub max_qubits: usize,
    #[arg(long, value_delimiter = ',', num_args = 1.., value_parser = parse_id)]
    pub ids: Vec<InequalityId>,
    #[arg(long, value_delimiter = ',', num_args = 1.., default_values_t = [2.0, 2.5, 3.0, 5.0, 8.0])]
    pub x_grid: Vec<f64>,
    #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true, default_values_t = [-0.5, -1.0, -2.0, -5.0])]
    pub y_grid: Vec<f64>,
    /// Trials that also cross-check a sub-block against the oracle.
    #[arg(long, default_value_t = 20)]
    pub oracle_trials: usize,
    /// Random starts per oracle call.
    #[arg(long, default_value_t = 20_000)]
    pub oracle_budget: usize,
    /// Write the per-id CSV here instead of stdout.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Replace the x/2 weight base with x (harness sensitivity check).
    #[arg(long, hide = true)]
    pub corrupt_weights: bool,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// concurrence, coa, cren, crenoa or wblock.
    #[arg(long, default_value = "concurrence")]
    pub measure: String,
    #[arg(long, default_value_t = 2)]
    pub rank: usize,
    /// Random starts per oracle call.
    #[arg(long, default_value_t = 20_000)]
    pub budget: usize,
    /// Refinement steps per refined start.
    #[arg(long, default_value_t = 200)]
    pub refine: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, env = "WMONO_SEED", default_value_t = 1)]
    pub seed: u64,
}

/// Parses `args` and runs the command; returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Evaluate(a) => evaluate::cmd_evaluate(&a, out),
        Command::Figure(a) => figure::cmd_figure(&a, out),
        Command::Verify(a) => verify::cmd_verify(&a, out),
        Command::Oracle(a) => oracle::cmd_oracle(&a, out),
    };
    match result {
        Ok(all_good) => {
            if all_good {
                EXIT_OK
            } else {
                EXIT_VIOLATION
            }
        }
        Err(e) => {
            let _ = writeln!(err, "wmono: {e}");
            EXIT_USAGE
        }
    }
}
