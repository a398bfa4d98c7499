//! `oldb`: pseudo-spectral Oldroyd-B runs, linear mode tables, identity
//! verification, norm functionals, and scaling sweeps.
//!
//! Exit codes: 0 success, 2 validation error (one JSON line on stderr),
//! 3 blow-up (partial artifacts written and flagged), 1 failed verification.

mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use oldb_core::Error;

#[derive(Parser)]
#[command(name = "oldb", version, about = "Incompressible Oldroyd-B spectral toolbox")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a simulation from a config file and write norm series, snapshots
    /// and a run summary.
    Simulate(commands::simulate::Args),
    /// Tabulate the linearized eigenvalue branches over a radius sweep.
    Modes(commands::modes::Args),
    /// Run the exact-identity suite against a state snapshot.
    Verify(commands::verify::Args),
    /// Run a simulation and emit the hybrid norm functional series.
    Xfun(commands::xfun::Args),
    /// Sweep oscillating initial data over epsilon and fit the norm scaling.
    Scaling(commands::scaling::Args),
    /// Evaluate one Besov norm of a snapshot field.
    Besov(commands::besov::Args),
}

fn emit_error(code: &str, message: &str) {
    let line = serde_json::json!({ "code": code, "message": message });
    eprintln!("{line}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            emit_error("validation", &e.to_string().replace('\n', " "));
            return ExitCode::from(2);
        }
    };
    let result = match cli.command {
        Command::Simulate(args) => commands::simulate::run(args),
        Command::Modes(args) => commands::modes::run(args),
        Command::Verify(args) => commands::verify::run(args),
        Command::Xfun(args) => commands::xfun::run(args),
        Command::Scaling(args) => commands::scaling::run(args),
        Command::Besov(args) => commands::besov::run(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            let (tag, exit) = match &err {
                Error::BlowUp { .. } => ("blowup", 3),
                _ => ("validation", 2),
            };
            emit_error(tag, &err.to_string());
            ExitCode::from(exit)
        }
    }
}
