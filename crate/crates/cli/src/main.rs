//! Command-line front end: deterministic CSV/JSON emission for spectrum
//! exports, time evolution runs, parameter sweeps and oracle checks.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{resolve, CommandKind, RunArgs};

#[derive(Parser)]
#[command(
    name = "dressed-cavity",
    version,
    about = "Dressed-state dynamics of a harmonic particle in a heated spherical cavity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the normal-mode spectrum and write spectrum.csv.
    Spectrum(RunArgs),
    /// Evolve the observables over a time grid and write series CSVs.
    Evolve(RunArgs),
    /// Sweep delta and/or beta; write one summary row per combination.
    Sweep(RunArgs),
    /// Cross-validate the analytic path against the dense and covariance
    /// oracles; exit nonzero if any check fails.
    OracleCheck(RunArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (args, kind) = match &cli.command {
        Command::Spectrum(a) => (a, CommandKind::Spectrum),
        Command::Evolve(a) => (a, CommandKind::Evolve),
        Command::Sweep(a) => (a, CommandKind::Sweep),
        Command::OracleCheck(a) => (a, CommandKind::OracleCheck),
    };
    match run(args, kind) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(args: &RunArgs, kind: CommandKind) -> anyhow::Result<bool> {
    let config = resolve(args, kind)?;
    let out = PathBuf::from(&config.out);
    match kind {
        CommandKind::Spectrum => {
            let manifest = commands::cmd_spectrum(&config, &out)?;
            eprintln!(
                "wrote {} files to {}",
                manifest.files.len() + 1,
                out.display()
            );
            Ok(true)
        }
        CommandKind::Evolve => {
            let manifest = commands::cmd_evolve(&config, &out)?;
            eprintln!(
                "wrote {} files to {}",
                manifest.files.len() + 1,
                out.display()
            );
            Ok(true)
        }
        CommandKind::Sweep => {
            let manifest = commands::cmd_sweep(&config, &out)?;
            eprintln!(
                "wrote {} files to {}",
                manifest.files.len() + 1,
                out.display()
            );
            Ok(true)
        }
        CommandKind::OracleCheck => {
            let (_, pass) = commands::cmd_oracle_check(&config, &out)?;
            Ok(pass)
        }
    }
}
