//! `symres` — experiment runner for oracle-based symmetry restoration.
//!
//! Four experiments are available (see the repository README for the
//! config schema): `shots-convergence`, `phase-scan`,
//! `sector-decomposition` and `qvap`. Results are written as CSV (default)
//! or JSON with the resolved configuration embedded; failures exit nonzero
//! after printing a typed error name such as `EMPTY_SECTOR`.

mod config;
mod error;
mod experiments;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use config::{ExperimentKind, Overrides, OutputFormat, RawConfig};
use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "symres", version, about = "Symmetry-restoration experiments on a statevector simulator")]
struct Cli {
    /// Experiment: shots-convergence | phase-scan | sector-decomposition | qvap
    #[arg(long)]
    experiment: Option<String>,
    /// TOML configuration file (flags override its header fields)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Seed for any sampled mode (and the optimizer restarts)
    #[arg(long)]
    seed: Option<u64>,
    /// Output path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: csv | json
    #[arg(long)]
    format: Option<String>,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let raw = match &cli.config {
        Some(path) => RawConfig::from_file(path)?,
        None => RawConfig::default(),
    };
    let overrides = Overrides {
        experiment: cli
            .experiment
            .as_deref()
            .map(str::parse::<ExperimentKind>)
            .transpose()?,
        seed: cli.seed,
        out: cli.out,
        format: cli
            .format
            .as_deref()
            .map(str::parse::<OutputFormat>)
            .transpose()?,
    };
    let resolved = config::resolve(raw, overrides)?;
    let result = experiments::run(&resolved)?;
    output::write_output(&resolved, &result)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}: {err}", err.name());
            ExitCode::FAILURE
        }
    }
}
