//! `newman`: command-line driver for Carathéodory sparsification and
//! public-to-private coin compilation.
//!
//! Exit codes: 0 success, 2 usage / guard / parse errors, 3 algorithmic
//! failure (sampling retries exhausted or a verification check failed).

mod commands;
mod failure;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "newman", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sparsify a convex combination read from a JSON point file.
    Sparsify(SparsifyArgs),
    /// Compile the public-coin EQUALITY protocol into a private-coin one.
    Newman(NewmanArgs),
    /// Monte Carlo check of a compiled protocol against its report.
    Verify(VerifyArgs),
    /// Index length of the compiled protocol as a function of n.
    Scaling(ScalingArgs),
}

#[derive(Debug, Args)]
struct SamplingArgs {
    /// Target L-inf error of the sparse combination.
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    /// Failure probability budget of a single draw.
    #[arg(long, default_value_t = 0.01)]
    eta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 16)]
    max_retries: usize,
}

#[derive(Debug, Args)]
struct SparsifyArgs {
    /// Input document {"dimension", "points", "weights"}.
    #[arg(long, short)]
    input: PathBuf,
    /// Output path; standard output when omitted.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[command(flatten)]
    sampling: SamplingArgs,
    /// Apply exact Carathéodory reduction before sampling.
    #[arg(long)]
    exact: bool,
}

#[derive(Debug, Args)]
struct NewmanArgs {
    /// Input bits per party.
    #[arg(long)]
    n: u32,
    /// Hash bits sent by Alice in the public-coin protocol.
    #[arg(long, default_value_t = 2)]
    t: u32,
    #[command(flatten)]
    sampling: SamplingArgs,
    /// Always apply exact reduction when the support exceeds N + 1.
    #[arg(long, conflicts_with = "no_exact_reduction")]
    exact_reduction: bool,
    /// Never apply exact reduction.
    #[arg(long)]
    no_exact_reduction: bool,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Report written by `newman newman`.
    #[arg(long)]
    report: PathBuf,
    /// Runs per input pair.
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    /// Input pairs to check; 0 checks all of them.
    #[arg(long, default_value_t = 16)]
    inputs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ScalingArgs {
    #[arg(long, value_delimiter = ',', default_value = "2,4,6,8")]
    n_values: Vec<u32>,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    #[arg(long, default_value_t = 0.01)]
    eta: f64,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sparsify(args) => commands::sparsify(args),
        Command::Newman(args) => commands::newman(args),
        Command::Verify(args) => commands::verify(args),
        Command::Scaling(args) => commands::scaling(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("newman: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}
