//! `oldb modes`

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use oldb_core::modes::eigenvalues;
use oldb_core::{Error, Result};

use crate::output::{write_atomic, Csv};

#[derive(Parser)]
pub struct Args {
    #[arg(long, default_value_t = 0.1)]
    pub r_min: f64,
    #[arg(long, default_value_t = 100.0)]
    pub r_max: f64,
    /// Number of radii in the sweep (linear spacing)
    #[arg(long, default_value_t = 500)]
    pub points: usize,
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: Args) -> Result<ExitCode> {
    if args.points < 2 {
        return Err(Error::Config("need at least 2 sweep points".into()));
    }
    if !(args.r_min > 0.0) || args.r_max <= args.r_min {
        return Err(Error::Config(format!(
            "bad radius range [{}, {}]",
            args.r_min, args.r_max
        )));
    }
    let mut csv = Csv::new(&[
        "r",
        "re_lambda_plus",
        "im_lambda_plus",
        "re_lambda_minus",
        "im_lambda_minus",
        "regime",
    ]);
    let h = (args.r_max - args.r_min) / (args.points - 1) as f64;
    for k in 0..args.points {
        let r = args.r_min + h * k as f64;
        let (lp, lm, regime) = eigenvalues(r)?;
        csv.row(&[
            r.into(),
            lp.re.into(),
            lp.im.into(),
            lm.re.into(),
            lm.im.into(),
            regime.as_str().into(),
        ]);
    }
    let bytes = csv.into_bytes();
    match &args.out {
        Some(path) => write_atomic(path, &bytes)?,
        None => print!("{}", String::from_utf8_lossy(&bytes)),
    }
    Ok(ExitCode::SUCCESS)
}
