//! `oldb scaling`: oscillating-data norms across epsilon, with a log-log fit.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use oldb_core::diagnostics::{oscillating_data_norm, scaling_fit};
use oldb_core::dyadic::DyadicPartition;
use oldb_core::spectral::Grid;
use oldb_core::{Error, Result};

use super::parse_epsilon;
use crate::output::{write_atomic, Csv};

#[derive(Parser)]
pub struct Args {
    /// Spatial dimension
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 256)]
    pub points: usize,
    /// High-frequency integrability exponent
    #[arg(long, default_value_t = 3.0)]
    pub p: f64,
    /// Comma-separated epsilon list; fractions like 1/8 are accepted
    #[arg(long, default_value = "1/8,1/16,1/32,1/64")]
    pub eps: String,
    /// Envelope width of the periodic bump
    #[arg(long, default_value_t = 0.5)]
    pub width: f64,
    #[arg(long, default_value_t = 1.0)]
    pub amplitude: f64,
    /// Split index; keep it low enough that every carrier lands high
    #[arg(long, default_value_t = 1)]
    pub j0: i32,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

/// Worker cap: `OLDB_THREADS`, default the epsilon count.
fn thread_cap(jobs: usize) -> usize {
    std::env::var("OLDB_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&v| v >= 1)
        .unwrap_or(jobs)
        .min(jobs)
}

pub fn run(args: Args) -> Result<ExitCode> {
    let eps: Vec<f64> = args
        .eps
        .split(',')
        .map(parse_epsilon)
        .collect::<Result<Vec<_>>>()?;
    if eps.len() < 4 {
        return Err(Error::Config(format!(
            "need at least 4 epsilon values for a fit, got {}",
            eps.len()
        )));
    }
    let grid = Grid::new(args.n, args.points)?;
    let part = DyadicPartition::new(&grid, args.j0)?;

    // independent per-epsilon jobs, fanned out across capped workers
    let cap = thread_cap(eps.len());
    let mut norms = vec![0.0f64; eps.len()];
    let mut first_err: Option<Error> = None;
    let mut start = 0;
    for slice in eps.chunks(cap) {
        let results: Vec<Result<f64>> = std::thread::scope(|scope| {
            let handles: Vec<_> = slice
                .iter()
                .map(|&e| {
                    let grid = &grid;
                    let part = &part;
                    scope.spawn(move || {
                        oscillating_data_norm(grid, part, e, args.width, args.amplitude, args.p)
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        });
        for (offset, res) in results.into_iter().enumerate() {
            match res {
                Ok(v) => norms[start + offset] = v,
                Err(e) => first_err = first_err.take().or(Some(e)),
            }
        }
        start += slice.len();
    }
    if let Some(e) = first_err {
        return Err(e);
    }

    let points: Vec<(f64, f64)> = eps.iter().cloned().zip(norms.iter().cloned()).collect();
    let fit = scaling_fit(&points)?;

    let mut csv = Csv::new(&["epsilon", "norm", "fitted_norm", "slope", "fit_residual"]);
    for &(e, v) in &points {
        csv.row(&[e.into(), v.into(), fit.predict(e).into(), fit.slope.into(), fit.residual.into()]);
    }
    write_atomic(&args.out.join("scaling.csv"), &csv.into_bytes())?;
    println!("fitted exponent {:.4} (rms log residual {:.3e})", fit.slope, fit.residual);
    Ok(ExitCode::SUCCESS)
}
