//! `oldb verify`: the exact-identity suite against a snapshot.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use oldb_core::diagnostics::{cancellation_residual_raw, transport_residual_raw};
use oldb_core::dyadic::DyadicPartition;
use oldb_core::solver::gamma_of;
use oldb_core::spectral::ops::{divergence, leray_project};
use oldb_core::spectral::snapshot;
use oldb_core::Result;

#[derive(Parser)]
pub struct Args {
    /// State snapshot (velocity record + stress record)
    #[arg(long)]
    pub snapshot: PathBuf,
    /// Low/high split index for the block checks
    #[arg(long, default_value_t = 2)]
    pub j0: i32,
}

struct Row {
    name: &'static str,
    value: f64,
    threshold: f64,
}

impl Row {
    fn pass(&self) -> bool {
        self.value <= self.threshold
    }
}

pub fn run(args: Args) -> Result<ExitCode> {
    let (u, tau) = snapshot::read_state_fields(&args.snapshot)?;
    let grid = u.grid().clone();
    let part = DyadicPartition::new(&grid, args.j0)?;

    let mut rows = Vec::new();

    let div = divergence(&u)?;
    let u_scale = u.spectral_max().max(1e-300);
    rows.push(Row {
        name: "velocity divergence (relative)",
        value: div.spectral_max() / u_scale,
        threshold: 1e-10,
    });
    let proj = leray_project(&u)?;
    rows.push(Row {
        name: "projection consistency |Pu - u|",
        value: proj.sub(&u)?.spectral_max() / u_scale,
        threshold: 1e-10,
    });
    rows.push(Row {
        name: "realness drift (u, tau)",
        value: u.conj_symmetry_residual().max(tau.conj_symmetry_residual()),
        threshold: 1e-10,
    });
    rows.push(Row {
        name: "partition of unity deviation",
        value: part.partition_deviation(),
        threshold: 1e-10,
    });
    let rec = part.reconstruct(&u);
    let mean_free = u.without_mean();
    rows.push(Row {
        name: "block reconstruction of u",
        value: rec.sub(&mean_free)?.spectral_max() / u_scale,
        threshold: 1e-9,
    });

    // raw residual probes: verify must report, never refuse, a bad state
    let gamma = gamma_of(&tau)?;
    let mut worst_cancel = 0.0f64;
    let mut worst_transport = 0.0f64;
    for j in part.blocks() {
        worst_cancel = worst_cancel.max(cancellation_residual_raw(&u, &tau, &part, j)?);
        for z in [&u, &tau, &gamma] {
            worst_transport = worst_transport.max(transport_residual_raw(&u, z, &part, j)?);
        }
    }
    rows.push(Row {
        name: "stress/strain cancellation (max over blocks)",
        value: worst_cancel,
        threshold: 1e-10,
    });
    rows.push(Row {
        name: "transport orthogonality (max over blocks)",
        value: worst_transport,
        threshold: 1e-10,
    });

    let mut all_pass = true;
    println!("{:<44} {:>13} {:>10} {:>6}", "identity", "residual", "threshold", "status");
    for row in &rows {
        let ok = row.pass();
        all_pass &= ok;
        println!(
            "{:<44} {:>13.3e} {:>10.1e} {:>6}",
            row.name,
            row.value,
            row.threshold,
            if ok { "PASS" } else { "FAIL" }
        );
    }
    Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
