mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{merge, CheckBoundsArgs, ConfigError, CriterionArgs, GenArgs, PermuteArgs, ReconstructArgs};

/// Reconstruction of entire functions on C^2 from their restrictions to lines
/// through the origin, and the growth criterion that governs its convergence.
#[derive(Parser, Debug)]
#[command(name = "holorecon", version)]
struct Cli {
    /// JSON file with the command's settings; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a direction sequence as JSON lines.
    Gen(GenArgs),
    /// Divided-difference growth matrix and its verdict.
    Criterion(CriterionArgs),
    /// Error curve of the line interpolation operator, as CSV.
    Reconstruct(ReconstructArgs),
    /// Reorder or thin out interleave(θ, κ).
    Permute(PermuteArgs),
    /// Numerical checks of the product, occupation and integral bounds.
    CheckBounds(CheckBoundsArgs),
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let file = cli.config.as_deref();
    match cli.command {
        Command::Gen(a) => commands::gen(merge("gen", &a, file)?),
        Command::Criterion(a) => commands::criterion(merge("criterion", &a, file)?),
        Command::Reconstruct(a) => commands::reconstruct(merge("reconstruct", &a, file)?),
        Command::Permute(a) => commands::permute(merge("permute", &a, file)?),
        Command::CheckBounds(a) => commands::check_bounds(merge("check-bounds", &a, file)?),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<ConfigError>().is_some() {
        return 2;
    }
    match err.downcast_ref::<holorecon::Error>() {
        Some(holorecon::Error::PrecisionFailure { .. }) => 3,
        Some(holorecon::Error::IdentityViolation { .. }) => 4,
        Some(
            holorecon::Error::InvalidPrecision { .. }
            | holorecon::Error::InvalidArgument(_)
            | holorecon::Error::Parse(_)
            | holorecon::Error::TruncationUnavailable,
        ) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
