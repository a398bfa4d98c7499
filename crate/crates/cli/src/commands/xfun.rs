//! `oldb xfun`: the hybrid norm functional of a run.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use oldb_core::diagnostics::{hybrid_functional, X_COMPONENT_NAMES};
use oldb_core::solver::{simulate, RunStatus};
use oldb_core::Result;

use super::load_run;
use crate::output::{write_atomic, Csv};

#[derive(Parser)]
pub struct Args {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    /// High-frequency integrability exponent (defaults to the config's)
    #[arg(long)]
    pub p: Option<f64>,
    /// Split index (defaults to the config's)
    #[arg(long)]
    pub j0: Option<i32>,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

pub fn run(args: Args) -> Result<ExitCode> {
    let mut setup = load_run(&args.config, args.seed, None, None, None)?;
    if let Some(p) = args.p {
        setup.file.output.p_high = p;
        setup.sim = setup.file.to_sim_config()?;
    }
    let traj = simulate(&setup.sim)?;
    let p = args.p.unwrap_or(setup.sim.output.p_high);
    let j0 = args.j0.unwrap_or(setup.sim.output.j0);
    let samples = hybrid_functional(&traj, p, j0)?;

    let header: Vec<&str> = std::iter::once("time")
        .chain(X_COMPONENT_NAMES)
        .chain(["x_total", "x_ratio"])
        .collect();
    let mut csv = Csv::new(&header);
    for s in &samples {
        let mut row: Vec<crate::output::CsvCell> = vec![s.t.into()];
        for c in s.components {
            row.push(c.into());
        }
        row.push(s.total.into());
        row.push(s.ratio_to_initial.into());
        csv.row(&row);
    }
    write_atomic(&args.out.join("xfun.csv"), &csv.into_bytes())?;

    let last = samples.last().expect("at least the initial sample");
    println!(
        "X(0) = {:.6e}, X({}) = {:.6e}, ratio {:.3}",
        samples[0].total, last.t, last.total, last.ratio_to_initial
    );
    if let RunStatus::BlowUp { t } = traj.status {
        let line = serde_json::json!({
            "code": "blowup",
            "message": format!("run blew up at t = {t}; functional covers the recorded part"),
        });
        eprintln!("{line}");
        return Ok(ExitCode::from(3));
    }
    Ok(ExitCode::SUCCESS)
}
