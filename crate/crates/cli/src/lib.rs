//! Batch front end for `stackelberg-core`: JSON instance files in, a JSON
//! run report out.
//!
//! Exit codes: 0 success, 1 internal failure (including a failed
//! self-check), 2 bad input or flags, 3 a size limit was hit.

pub mod check;
pub mod commands;
pub mod error;
pub mod formats;
pub mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "stackelberg", version, about = "Stackelberg equilibrium solvers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Where to write the report (or the generated instance).
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
    /// Spaces per indent level; 0 prints one line.
    #[arg(long, global = true, default_value_t = 2)]
    pub json_indent: usize,
    /// Add wall-clock time to the report.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Se,
    Nash,
    Maximin,
    Discretize,
}

#[derive(Debug, Args)]
pub struct InputArg {
    /// Instance file, or `-` for standard input.
    #[arg(short, long)]
    pub input: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a bimatrix game.
    SolveBimatrix {
        #[command(flatten)]
        input: InputArg,
        #[arg(long, value_enum, default_value_t = Method::Se)]
        method: Method,
        /// Grid step `p/q` (or a decimal); required by `discretize`.
        #[arg(long)]
        eps: Option<String>,
    },
    /// Same as `solve-bimatrix --method discretize`.
    Discretize {
        #[command(flatten)]
        input: InputArg,
        #[arg(long)]
        eps: String,
    },
    /// Solve an incentive game.
    SolveIncentive {
        #[command(flatten)]
        input: InputArg,
        /// Solve the plain game over the listed family instead.
        #[arg(long)]
        no_incentives: bool,
    },
    /// Permuted matching games.
    Pm {
        #[command(subcommand)]
        sub: PmCommand,
    },
    /// Instance reductions.
    Reduce {
        #[command(subcommand)]
        sub: ReduceCommand,
    },
    /// Seeded instance generators.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
}

#[derive(Debug, Subcommand)]
pub enum PmCommand {
    /// Greedy two-point leader strategy.
    Approx {
        #[command(flatten)]
        input: InputArg,
        #[arg(long, default_value = "1/100")]
        eps: String,
    },
    /// Exact optimum by enumeration, plus the equilibrium of the explicit game.
    Bruteforce {
        #[command(flatten)]
        input: InputArg,
    },
    /// Follower best response to a leader strategy.
    Bestresponse {
        #[command(flatten)]
        input: InputArg,
        /// Leader strategy file; defaults to the two-point strategy.
        #[arg(long)]
        strategy: Option<PathBuf>,
        #[arg(long, default_value = "1/100")]
        eps: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum ReduceCommand {
    /// 3D matching to permuted matching; also writes a `.map.json` sidecar.
    #[command(name = "3dm-to-pm")]
    ThreeDmToPm {
        #[command(flatten)]
        input: InputArg,
    },
}

#[derive(Debug, Subcommand)]
pub enum GenKind {
    RandomBimatrix {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        rows: usize,
        #[arg(long, default_value_t = 3)]
        cols: usize,
        /// Reject sizes beyond the exact solvers' limits.
        #[arg(long)]
        verifiable: bool,
    },
    RandomPm {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        vertices: usize,
        #[arg(long, default_value_t = 6)]
        edges: usize,
        #[arg(long)]
        verifiable: bool,
    },
    #[command(name = "random-3dm")]
    Random3dm {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        na: usize,
        #[arg(long, default_value_t = 3)]
        nb: usize,
        #[arg(long, default_value_t = 3)]
        nc: usize,
        /// Number of triples drawn with repetition.
        #[arg(long, conflicts_with = "density")]
        count: Option<usize>,
        /// Keep each possible triple with this probability.
        #[arg(long)]
        density: Option<f64>,
        #[arg(long)]
        verifiable: bool,
    },
}

/// Parses argv (without the program name), runs, and returns the exit code.
/// Clap's own usage errors exit with 2.
pub fn main_with_args(args: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(std::iter::once("stackelberg".to_string()).chain(args.iter().cloned())) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match commands::run(&cli, args) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("stackelberg: {e}");
            e.exit_code()
        }
    }
}
