//! The hybrid low/high norm functional along a trajectory.
//!
//! Seven channels, all nondecreasing in time:
//!
//! | # | channel                 | quantity                                              |
//! |---|-------------------------|-------------------------------------------------------|
//! | 0 | `low_pair_sup`          | sup-in-time low norm of `(u, tau)` at `B^{n/2-1}_2`   |
//! | 1 | `low_u_smoothing`       | time integral of low `u` at `B^{n/2+1}_2`             |
//! | 2 | `low_gamma_smoothing`   | time integral of low `gamma` at `B^{n/2+1}_2`         |
//! | 3 | `high_u_sup`            | sup-in-time high `u` at `B^{n/p-1}_p`                 |
//! | 4 | `high_tau_sup`          | sup-in-time high `tau` at `B^{n/p}_p`                 |
//! | 5 | `high_gamma_damping`    | time integral of high `gamma` at `B^{n/p}_p`          |
//! | 6 | `high_u_smoothing`      | time integral of high `u` at `B^{n/p+1}_p`            |
//!
//! Sup channels are blockwise running maxima (the discrete reading of the
//! time-space Besov sup); integrals are blockwise trapezoids.

use crate::dyadic::Split;
use crate::error::{Error, Result};
use crate::solver::Trajectory;

pub const X_COMPONENT_NAMES: [&str; 7] = [
    "low_pair_sup",
    "low_u_smoothing",
    "low_gamma_smoothing",
    "high_u_sup",
    "high_tau_sup",
    "high_gamma_damping",
    "high_u_smoothing",
];

#[derive(Clone, Copy, Debug)]
pub struct XSample {
    pub t: f64,
    pub components: [f64; 7],
    pub total: f64,
    /// `X(t) / X(0)`; 0 when the initial value vanishes.
    pub ratio_to_initial: f64,
}

/// Blockwise running max, then the weighted block sum, per time.
pub(crate) fn sup_channel_at(
    traj: &Trajectory,
    rows: &[Vec<f64>],
    s: f64,
    split: Split,
    j0: i32,
) -> Vec<f64> {
    let mut running = vec![0.0f64; traj.block_count()];
    rows.iter()
        .map(|row| {
            for (r, &v) in running.iter_mut().zip(row) {
                *r = r.max(v);
            }
            traj.weighted_block_sum_at(&running, s, split, j0)
        })
        .collect()
}

pub(crate) fn sup_channel(traj: &Trajectory, rows: &[Vec<f64>], s: f64, split: Split) -> Vec<f64> {
    sup_channel_at(traj, rows, s, split, traj.j0)
}

/// Blockwise trapezoid integral, then the weighted block sum, per time.
pub(crate) fn integral_channel_at(
    traj: &Trajectory,
    rows: &[Vec<f64>],
    s: f64,
    split: Split,
    j0: i32,
) -> Vec<f64> {
    let blocks = traj.block_count();
    let mut acc = vec![0.0f64; blocks];
    let times = &traj.times;
    let mut out = Vec::with_capacity(rows.len());
    for k in 0..rows.len() {
        if k > 0 {
            let h = times[k] - times[k - 1];
            for b in 0..blocks {
                acc[b] += 0.5 * (rows[k][b] + rows[k - 1][b]) * h;
            }
        }
        out.push(traj.weighted_block_sum_at(&acc, s, split, j0));
    }
    out
}

pub(crate) fn integral_channel(
    traj: &Trajectory,
    rows: &[Vec<f64>],
    s: f64,
    split: Split,
) -> Vec<f64> {
    integral_channel_at(traj, rows, s, split, traj.j0)
}

pub(crate) fn stacked_rows(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| (x * x + y * y).sqrt()).collect())
        .collect()
}

/// Assemble the functional from a recorded trajectory.
///
/// `p` must match the trajectory's recorded high-frequency exponent and lie
/// in `[2, 4)`; `j0` must sit inside the recorded block range (the recorded
/// split is ignored in favour of this argument). The total is checked to be
/// nondecreasing.
pub fn hybrid_functional(traj: &Trajectory, p: f64, j0: i32) -> Result<Vec<XSample>> {
    if !(2.0..4.0).contains(&p) {
        return Err(Error::ParamOutOfRange(format!("p = {p} outside [2, 4)")));
    }
    if (p - traj.p_high).abs() > 1e-12 {
        return Err(Error::Config(format!(
            "trajectory recorded block norms at p = {}, requested {p}",
            traj.p_high
        )));
    }
    if j0 < traj.j_min || j0 > traj.j_max {
        return Err(Error::Config(format!(
            "split index {j0} outside the recorded range [{}, {}]",
            traj.j_min, traj.j_max
        )));
    }
    if traj.times.is_empty() {
        return Err(Error::SeriesTooShort { len: 0 });
    }

    let n = traj.dim as f64;
    let pair = stacked_rows(&traj.u_l2, &traj.tau_l2);
    let c0 = sup_channel_at(traj, &pair, n / 2.0 - 1.0, Split::Low, j0);
    let c1 = integral_channel_at(traj, &traj.u_l2, n / 2.0 + 1.0, Split::Low, j0);
    let c2 = integral_channel_at(traj, &traj.gamma_l2, n / 2.0 + 1.0, Split::Low, j0);
    let c3 = sup_channel_at(traj, &traj.u_lp, n / p - 1.0, Split::High, j0);
    let c4 = sup_channel_at(traj, &traj.tau_lp, n / p, Split::High, j0);
    let c5 = integral_channel_at(traj, &traj.gamma_lp, n / p, Split::High, j0);
    let c6 = integral_channel_at(traj, &traj.u_lp, n / p + 1.0, Split::High, j0);

    let mut samples = Vec::with_capacity(traj.times.len());
    let mut prev_total = 0.0f64;
    let mut x0 = 0.0f64;
    for (k, &t) in traj.times.iter().enumerate() {
        let components = [c0[k], c1[k], c2[k], c3[k], c4[k], c5[k], c6[k]];
        let total: f64 = components.iter().sum();
        if k == 0 {
            x0 = total;
        } else if total < prev_total - 1e-12 * prev_total.max(1.0) {
            return Err(Error::Precondition(format!(
                "hybrid functional decreased at t = {t}: {total} < {prev_total}"
            )));
        }
        prev_total = total;
        samples.push(XSample {
            t,
            components,
            total,
            ratio_to_initial: if x0 > 0.0 { total / x0 } else { 0.0 },
        });
    }
    Ok(samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::DyadicPartition;
    use crate::solver::{
        simulate, GridConfig, InitialConfig, InitialSpec, IntegratorConfig, OutputConfig,
        RunStatus, SimConfig, State, TermSwitches, Trajectory,
    };
    use crate::spectral::{ConstitutiveParams, Grid, Rank, SpectralField};
    use num_complex::Complex64;

    #[test]
    fn zero_trajectory_gives_zero_functional() {
        let cfg = SimConfig {
            grid: GridConfig { dim: 2, points: 32 },
            physics: ConstitutiveParams::default(),
            integrator: IntegratorConfig { dt: 0.01, t_end: 0.05, ..Default::default() },
            initial: InitialConfig {
                spec: InitialSpec::RandomBand {
                    amplitude_u: 0.0,
                    amplitude_tau: 0.0,
                    k_min: 1,
                    k_max: 2,
                    seed: 0,
                },
                x0_target: None,
            },
            output: OutputConfig::default(),
        };
        let traj = simulate(&cfg).unwrap();
        let xs = hybrid_functional(&traj, 3.0, 2).unwrap();
        assert!(xs.iter().all(|s| s.total == 0.0 && s.ratio_to_initial == 0.0));
    }

    #[test]
    fn x0_matches_initial_data_norm() {
        let cfg = SimConfig {
            grid: GridConfig { dim: 2, points: 32 },
            physics: ConstitutiveParams { b: 0.5, ..Default::default() },
            integrator: IntegratorConfig { dt: 0.005, t_end: 0.1, ..Default::default() },
            initial: InitialConfig {
                spec: InitialSpec::RandomBand {
                    amplitude_u: 1e-3,
                    amplitude_tau: 1e-3,
                    k_min: 1,
                    k_max: 6,
                    seed: 4,
                },
                x0_target: None,
            },
            output: OutputConfig::default(),
        };
        let traj = simulate(&cfg).unwrap();
        let xs = hybrid_functional(&traj, 3.0, 2).unwrap();
        assert!((xs[0].total - traj.x0).abs() <= 1e-12 * traj.x0);
        // monotone by construction
        for w in xs.windows(2) {
            assert!(w[1].total >= w[0].total - 1e-15);
        }
        assert!(hybrid_functional(&traj, 2.5, 2).is_err(), "p must match the recording");
        assert!(hybrid_functional(&traj, 3.0, 99).is_err());
    }

    #[test]
    fn heat_decay_integral_matches_per_mode_oracle() {
        // single low mode, no stress, no nonlinearity: the smoothing channel
        // integrates an exact exponential, integral = (1 - e^{-r^2 T}) / r^2
        // times the weighted initial block norm
        let g = Grid::new(2, 32).unwrap();
        let mut u = SpectralField::zeros(&g, Rank::Vector);
        u.set_mode_pair(1, &[1, 0], Complex64::new(0.0, 0.4));
        let state0 = State::new(0.0, u, SpectralField::zeros(&g, Rank::SymTensor)).unwrap();

        let params = ConstitutiveParams { k2: 0.0, ..Default::default() };
        let terms = TermSwitches { nonlinear: false, coupling: true };
        let dt = 1e-3;
        let t_end = 6.0;
        let part = DyadicPartition::new(&g, 2).unwrap();
        let mut traj = Trajectory {
            dim: 2,
            p_high: 3.0,
            j0: 2,
            j_min: part.j_min(),
            j_max: part.j_max(),
            times: vec![],
            u_l2: vec![],
            tau_l2: vec![],
            gamma_l2: vec![],
            u_lp: vec![],
            tau_lp: vec![],
            gamma_lp: vec![],
            invariants: vec![],
            states: vec![],
            status: RunStatus::Completed,
            x0: 0.0,
        };
        let mut record = |st: &State| {
            traj.times.push(st.t);
            traj.u_l2.push(part.block_l2_norms(&st.u));
            traj.tau_l2.push(part.block_l2_norms(&st.tau));
            traj.gamma_l2.push(part.block_l2_norms(&st.tau)); // tau stays 0
            traj.u_lp.push(part.block_lp_norms(&st.u, 3.0));
            traj.tau_lp.push(part.block_lp_norms(&st.tau, 3.0));
            traj.gamma_lp.push(part.block_lp_norms(&st.tau, 3.0));
        };
        record(&state0);
        let mut s = state0.clone();
        for k in 1..=(t_end / dt) as usize {
            s = crate::solver::step(&s, dt, &params, terms, 0.5).unwrap();
            if k % 10 == 0 {
                record(&s);
            }
        }
        let xs = hybrid_functional(&traj, 3.0, 2).unwrap();
        let last = xs.last().unwrap();

        // oracle: per-block heat integral for the single mode r = 1
        let u0_blocks = part.block_l2_norms(&state0.u);
        let weighted: f64 = part
            .blocks()
            .filter(|&j| j <= 2)
            .map(|j| (2.0 * j as f64).exp2() * u0_blocks[part.block_offset(j)])
            .sum();
        let expect_integral = weighted * (1.0 - (-t_end).exp());
        let got_integral = last.components[1];
        assert!(
            (got_integral - expect_integral).abs() <= 1e-3 * expect_integral,
            "heat integral {got_integral:.6e} vs oracle {expect_integral:.6e}"
        );
        // and the sup channel is just the initial norm
        let expect_sup: f64 = part
            .blocks()
            .filter(|&j| j <= 2)
            .map(|j| u0_blocks[part.block_offset(j)])
            .sum();
        assert!((last.components[0] - expect_sup).abs() <= 1e-9 * expect_sup);
    }
}
