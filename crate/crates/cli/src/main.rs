//! `whittaker`: root systems, simplicity certificates, parameter sweeps and
//! composition-length checks for Whittaker modules.
//!
//! Exit codes: 0 success (any completed verdict), 1 computation error or a
//! violated check, 2 usage or configuration error.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Engines, RunArgs};
use error::{CliError, EXIT_FAILURE};

#[derive(Debug, Parser)]
#[command(name = "whittaker", version, about = "Exact Whittaker vector computations")]
struct Cli {
    /// Directory for the persistent straightening cache.
    #[arg(long, global = true, env = whittaker_core::cache::CACHE_DIR_ENV)]
    cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print a root system with its structure constants as JSON.
    Roots {
        #[arg(long = "type")]
        cartan_type: String,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute Whittaker vectors and a simplicity verdict for one module.
    Certify(RunArgs),
    /// Certify every point of a parameter grid.
    Sweep(RunArgs),
    /// Check dim Wh <= composition length on a suite of modules.
    Corollary(RunArgs),
    /// Inspect or clear the straightening cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Debug, Subcommand)]
enum CacheAction {
    Stats,
    Clear,
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let mut engines = Engines::new(cli.cache_dir.clone());
    match cli.command {
        Command::Roots { cartan_type, rank, out } => commands::roots(&cartan_type, rank, out.as_deref()).map(|_| true),
        Command::Certify(args) => commands::certify(&args, &mut engines).map(|_| true),
        Command::Sweep(args) => commands::sweep_cmd(&args, &mut engines),
        Command::Corollary(args) => commands::corollary(&args, &mut engines),
        Command::Cache { action } => {
            let dir = cli.cache_dir.ok_or_else(|| {
                CliError::Usage(format!(
                    "no cache directory: set {} or pass --cache-dir",
                    whittaker_core::cache::CACHE_DIR_ENV
                ))
            })?;
            match action {
                CacheAction::Stats => commands::cache_stats(&dir),
                CacheAction::Clear => commands::cache_clear(&dir),
            }
            .map(|_| true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAILURE as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
