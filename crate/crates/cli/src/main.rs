//! `tankpost` command-line interface.
//!
//! Data goes to standard output (or `--out`); diagnostics go to standard
//! error. Exit codes: 0 success, 2 invalid input, 1 internal error.

mod commands;
mod output;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use commands::{
    cmd_calibrate, cmd_estimate, cmd_sensitivity, cmd_simulate, CalibrateArgs, CliError,
    EstimateArgs, SensitivityArgs, SimulateArgs,
};
use output::{to_json, ErrorObject};

#[derive(Debug, Parser)]
#[command(name = "tankpost", version, about = "Bayesian population-size estimation from captured serial numbers")]
struct Cli {
    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Posterior table and summaries for one sample and prior.
    Estimate(EstimateArgs),
    /// Posterior summaries across several uniform-prior upper bounds.
    Sensitivity(SensitivityArgs),
    /// Draw a sample of serial numbers from a population of known size.
    Simulate(SimulateArgs),
    /// Monte Carlo coverage check of the high-mass subsets.
    Calibrate(CalibrateArgs),
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let bytes = match &cli.command {
        Command::Estimate(a) => cmd_estimate(a)?,
        Command::Sensitivity(a) => cmd_sensitivity(a)?,
        Command::Simulate(a) => cmd_simulate(a)?,
        Command::Calibrate(a) => cmd_calibrate(a)?,
    };
    match &cli.out {
        Some(path) => fs::write(path, &bytes)
            .map_err(|e| CliError::usage("IoError", format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(&bytes)
            .map_err(|e| CliError::Internal(e.to_string())),
    }
}

fn report(err: &CliError) -> ExitCode {
    let (code, detail) = match err {
        CliError::Usage { code, detail } => (code.as_str(), detail.clone()),
        CliError::Internal(detail) => ("InternalError", detail.clone()),
    };
    eprintln!("error: {detail}");
    let obj = ErrorObject {
        error: code,
        detail,
    };
    if let Ok(bytes) = to_json(&obj) {
        let _ = std::io::stdout().write_all(&bytes);
    }
    ExitCode::from(err.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.render().to_string();
            let detail = rendered.trim_end().trim_start_matches("error: ");
            return report(&CliError::usage("UsageError", detail));
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => report(&e),
    }
}
