pub mod besov;
pub mod modes;
pub mod scaling;
pub mod simulate;
pub mod verify;
pub mod xfun;

use std::path::Path;

use oldb_core::solver::{SimConfig, Trajectory};
use oldb_core::{Error, Result};

use crate::config::FileConfig;

/// Shared simulate/xfun plumbing: load a config, apply overrides, run.
pub(crate) struct RunSetup {
    pub file: FileConfig,
    pub sim: SimConfig,
}

pub(crate) fn load_run(
    config: &Path,
    seed: Option<u64>,
    points: Option<usize>,
    dt: Option<f64>,
    t_end: Option<f64>,
) -> Result<RunSetup> {
    let mut file = FileConfig::load(config)?;
    if let Some(seed) = seed {
        file.initial.seed = seed;
    }
    if let Some(points) = points {
        file.grid.points = points;
    }
    if let Some(dt) = dt {
        file.integrator.dt = dt;
    }
    if let Some(t_end) = t_end {
        file.integrator.t_end = t_end;
    }
    let sim = file.to_sim_config()?;
    Ok(RunSetup { file, sim })
}

/// Column name for a norm-series channel: `u_B_2_1_s1.0_low`.
pub(crate) fn norm_column(field: &str, p: f64, s: f64, split: &str) -> String {
    format!("{field}_B_{p}_1_s{s:.1}_{split}")
}

/// The norm-series CSV: one column per recorded (space, norm) pair.
pub(crate) fn norms_csv(traj: &Trajectory) -> Vec<u8> {
    use oldb_core::dyadic::Split;
    use oldb_core::solver::{Channel, PNorm};

    let n = traj.dim as f64;
    let p = traj.p_high;
    let channels: [(&str, Channel, PNorm, f64, Split, &str); 10] = [
        ("u", Channel::U, PNorm::L2, n / 2.0 - 1.0, Split::Low, "low"),
        ("tau", Channel::Tau, PNorm::L2, n / 2.0 - 1.0, Split::Low, "low"),
        ("tau", Channel::Tau, PNorm::L2, n / 2.0, Split::Low, "low"),
        ("gamma", Channel::Gamma, PNorm::L2, n / 2.0 - 1.0, Split::Low, "low"),
        ("u", Channel::U, PNorm::L2, n / 2.0 + 1.0, Split::Low, "low"),
        ("gamma", Channel::Gamma, PNorm::L2, n / 2.0 + 1.0, Split::Low, "low"),
        ("u", Channel::U, PNorm::High, n / p - 1.0, Split::High, "high"),
        ("tau", Channel::Tau, PNorm::High, n / p, Split::High, "high"),
        ("gamma", Channel::Gamma, PNorm::High, n / p, Split::High, "high"),
        ("u", Channel::U, PNorm::High, n / p + 1.0, Split::High, "high"),
    ];
    let header: Vec<String> = std::iter::once("time".to_string())
        .chain(channels.iter().map(|(f, _, pk, s, _, split)| {
            let pv = match pk {
                PNorm::L2 => 2.0,
                PNorm::High => p,
            };
            norm_column(f, pv, *s, split)
        }))
        .collect();
    let header_refs: Vec<&str> = header.iter().map(|s| s.as_str()).collect();
    let mut csv = crate::output::Csv::new(&header_refs);

    let series: Vec<Vec<f64>> = channels
        .iter()
        .map(|(_, ch, pk, s, split, _)| traj.besov_series(*ch, *pk, *s, *split))
        .collect();
    for (k, &t) in traj.times.iter().enumerate() {
        let mut row: Vec<crate::output::CsvCell> = vec![t.into()];
        for col in &series {
            row.push(col[k].into());
        }
        csv.row(&row);
    }
    csv.into_bytes()
}

pub(crate) fn parse_epsilon(text: &str) -> Result<f64> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let n: f64 = num
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad epsilon fraction `{text}`")))?;
        let d: f64 = den
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad epsilon fraction `{text}`")))?;
        if d == 0.0 {
            return Err(Error::Config(format!("bad epsilon fraction `{text}`")));
        }
        Ok(n / d)
    } else {
        text.parse().map_err(|_| Error::Config(format!("bad epsilon `{text}`")))
    }
}
