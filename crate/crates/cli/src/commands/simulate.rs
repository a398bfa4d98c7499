//! `oldb simulate`

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use oldb_core::solver::{simulate, RunStatus};
use oldb_core::spectral::snapshot;
use oldb_core::Result;

use super::{load_run, norms_csv};
use crate::output::write_atomic;

#[derive(Parser)]
pub struct Args {
    /// Config file (TOML sections: grid, physics, integrator, initial, output)
    #[arg(long)]
    pub config: PathBuf,
    /// Override the initial-data seed
    #[arg(long)]
    pub seed: Option<u64>,
    /// Override the grid resolution
    #[arg(long)]
    pub points: Option<usize>,
    /// Override the time step
    #[arg(long)]
    pub dt: Option<f64>,
    /// Override the final time
    #[arg(long)]
    pub t_end: Option<f64>,
    /// Output directory
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

pub fn run(args: Args) -> Result<ExitCode> {
    let setup = load_run(&args.config, args.seed, args.points, args.dt, args.t_end)?;
    let traj = simulate(&setup.sim)?;

    std::fs::create_dir_all(&args.out)?;
    write_atomic(&args.out.join("norms.csv"), &norms_csv(&traj))?;

    for (idx, state) in traj.states.iter().enumerate() {
        let name = if idx == traj.states.len() - 1 && idx > 0 {
            "state_final.oldb".to_string()
        } else {
            format!("state_{idx:04}.oldb")
        };
        let path = args.out.join(name);
        let tmp = path.with_extension("tmp");
        snapshot::write_state_fields(&tmp, &state.u, &state.tau)?;
        std::fs::rename(&tmp, &path)?;
    }

    let max_div = traj.invariants.iter().map(|i| i.div).fold(0.0f64, f64::max);
    let max_sym = traj.invariants.iter().map(|i| i.sym).fold(0.0f64, f64::max);
    let max_real = traj.invariants.iter().map(|i| i.realness).fold(0.0f64, f64::max);
    let (status, blow_t) = match traj.status {
        RunStatus::Completed => ("completed", None),
        RunStatus::BlowUp { t } => ("blowup", Some(t)),
    };
    let summary = serde_json::json!({
        "status": status,
        "blowup_time": blow_t,
        "t_final": traj.times.last(),
        "x0": traj.x0,
        "seed": setup.file.initial.seed,
        "max_div_residual": max_div,
        "max_sym_residual": max_sym,
        "max_realness_residual": max_real,
        "config": setup.file,
    });
    write_atomic(&args.out.join("run.json"), format!("{summary:#}\n").as_bytes())?;

    if let RunStatus::BlowUp { t } = traj.status {
        let line = serde_json::json!({
            "code": "blowup",
            "message": format!("solution lost finiteness at t = {t}; partial artifacts in {}", args.out.display()),
        });
        eprintln!("{line}");
        return Ok(ExitCode::from(3));
    }
    println!(
        "completed t = {:.6}: {} norm samples, {} snapshots, X0 = {:.6e}",
        traj.times.last().unwrap(),
        traj.times.len(),
        traj.states.len(),
        traj.x0
    );
    Ok(ExitCode::SUCCESS)
}
