//! `ncbgg`: command-line front end for the workbench.

mod commands;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ncbgg::Error;

#[derive(Parser)]
#[command(name = "ncbgg", version, about = "Koszul duals, Frobenius resolutions, BGG functors and point schemes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

/// Options shared by every subcommand.
#[derive(Args, Clone, Debug)]
pub struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Seed for randomized isomorphism tests.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random trials per isomorphism test.
    #[arg(long, default_value_t = 32)]
    pub trials: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Koszul dual presentation.
    Dual {
        /// Presentation file.
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Hilbert function of the algebra through degree N.
    Truncate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(2..))]
        trunc: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Hilbert reciprocity and Koszul complex exactness through degree N.
    Probe {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(2..))]
        trunc: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Minimal injective resolution of a module over a Frobenius algebra.
    Resolve {
        /// Module file.
        #[arg(long)]
        input: PathBuf,
        /// Presentation of the Frobenius algebra the module lives over.
        #[arg(long)]
        dual_input: PathBuf,
        #[arg(long, default_value_t = 6)]
        steps: usize,
        #[command(flatten)]
        common: Common,
    },
    /// φ(M), the γ∘φ round trip and the Bass number identity.
    Bgg {
        /// Module file.
        #[arg(long)]
        input: PathBuf,
        /// Presentation of the Frobenius algebra the module lives over.
        #[arg(long)]
        dual_input: PathBuf,
        /// Truncation degree of the infinite side.
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(2..))]
        trunc: u64,
        /// Internal degrees of the φ table, `lo:hi`.
        #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
        window: Option<(i64, i64)>,
        #[command(flatten)]
        common: Common,
    },
    /// Point scheme, σ and predicted periods.
    Points {
        #[arg(long)]
        input: PathBuf,
        /// Orbit length bound.
        #[arg(long, default_value_t = 64)]
        bound: usize,
        /// A point as colon-separated coordinates, e.g. `1:0:2`.
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        /// Truncation used when transporting a point module.
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(2..))]
        trunc: u64,
        #[command(flatten)]
        common: Common,
    },
}

fn parse_window(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected lo:hi, found {s:?}"))?;
    let lo: i64 = a.trim().parse().map_err(|_| format!("bad lower bound {a:?}"))?;
    let hi: i64 = b.trim().parse().map_err(|_| format!("bad upper bound {b:?}"))?;
    if lo > hi {
        return Err(format!("empty window {lo}:{hi}"));
    }
    Ok((lo, hi))
}

/// A failure together with the exit code it maps to.
pub struct Failure {
    pub error: Error,
    pub hint: Option<String>,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure { error, hint: None }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::InvalidField(_) | Error::DimensionMismatch(_) => 2,
        Error::WindowTooSmall(_) => 4,
        Error::Inconclusive(_) => 5,
        _ => 3,
    }
}

/// Result of a subcommand: the rendered report and whether its verdict
/// was inconclusive.
pub struct Outcome {
    pub text: String,
    pub inconclusive: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Dual { input, common } => commands::dual(&input, &common),
        Command::Truncate { input, trunc, common } => commands::truncate(&input, trunc as usize, &common),
        Command::Probe { input, trunc, common } => commands::probe(&input, trunc as usize, &common),
        Command::Resolve { input, dual_input, steps, common } => commands::resolve(&input, &dual_input, steps, &common),
        Command::Bgg { input, dual_input, trunc, window, common } => {
            commands::bgg(&input, &dual_input, trunc as usize, window, &common)
        }
        Command::Points { input, bound, point, trunc, common } => {
            commands::points(&input, bound, point.as_deref(), trunc as usize, &common)
        }
    };
    match result {
        Ok(out) => {
            print!("{}", out.text);
            if out.inconclusive {
                eprintln!("verdict inconclusive; try more --trials or a larger field");
                ExitCode::from(5)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.error);
            if let Some(h) = f.hint {
                eprintln!("hint: {h}");
            }
            ExitCode::from(exit_code(&f.error))
        }
    }
}
