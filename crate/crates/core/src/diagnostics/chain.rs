//! Running empirical constants for the a priori estimate chain.
//!
//! Each monitor evaluates the left- and right-hand side of one closed
//! estimate (with constant 1) along the trajectory and reports the running
//! supremum of their ratio. Finite, stable ratios are the numerical
//! fingerprint of the estimates actually closing; the monitor never asserts
//! a bound.

use crate::dyadic::Split;
use crate::error::{Error, Result};
use crate::solver::{running_integral, Channel, PNorm, Trajectory};

use super::xfun::{hybrid_functional, integral_channel, stacked_rows, sup_channel};

#[derive(Clone, Copy, Debug)]
pub struct ChainEntry {
    pub name: &'static str,
    /// `sup_t LHS(t) / RHS(t)`; NaN when undefined.
    pub sup_ratio: f64,
    pub final_ratio: f64,
    /// False when both sides vanish identically (zero data).
    pub defined: bool,
    /// Set when the ratio at the end exceeds twice the mid-run ratio.
    pub growing: bool,
}

#[derive(Clone, Debug)]
pub struct ChainReport {
    pub entries: Vec<ChainEntry>,
}

impl ChainReport {
    pub fn entry(&self, name: &str) -> Option<&ChainEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn all_defined_finite(&self) -> bool {
        self.entries.iter().all(|e| !e.defined || e.sup_ratio.is_finite())
    }
}

fn ratio_entry(name: &'static str, lhs: &[f64], rhs: &[f64]) -> ChainEntry {
    debug_assert_eq!(lhs.len(), rhs.len());
    let mut sup = 0.0f64;
    let mut defined = false;
    let mut ratios = vec![f64::NAN; lhs.len()];
    for (k, (&l, &r)) in lhs.iter().zip(rhs).enumerate() {
        if r > 0.0 {
            defined = true;
            let q = l / r;
            ratios[k] = q;
            sup = sup.max(q);
        }
    }
    let final_ratio = *ratios.last().unwrap_or(&f64::NAN);
    let mid_ratio = ratios[ratios.len() / 2];
    let growing = defined
        && final_ratio.is_finite()
        && mid_ratio.is_finite()
        && mid_ratio > 0.0
        && final_ratio > 2.0 * mid_ratio;
    ChainEntry {
        name,
        sup_ratio: if defined { sup } else { f64::NAN },
        final_ratio,
        defined,
        growing,
    }
}

/// Evaluate the five closed estimates of the energy argument.
pub fn estimate_chain_monitor(traj: &Trajectory) -> Result<ChainReport> {
    if traj.times.len() < 2 {
        return Err(Error::SeriesTooShort { len: traj.times.len() });
    }
    let n = traj.dim as f64;
    let p = traj.p_high;
    let s_low = n / 2.0 - 1.0;
    let times = &traj.times;

    // instantaneous norm series
    let pair_low = traj.pair_besov_series(Channel::U, Channel::Tau, PNorm::L2, s_low, Split::Low);
    let u_high_sub = traj.besov_series(Channel::U, PNorm::High, n / p - 1.0, Split::High);
    let tau_high = traj.besov_series(Channel::Tau, PNorm::High, n / p, Split::High);
    let u_low_smooth = traj.besov_series(Channel::U, PNorm::L2, n / 2.0 + 1.0, Split::Low);
    let u_high_smooth = traj.besov_series(Channel::U, PNorm::High, n / p + 1.0, Split::High);
    let tau_low = traj.besov_series(Channel::Tau, PNorm::L2, s_low, Split::Low);
    let gamma_low_smooth = traj.besov_series(Channel::Gamma, PNorm::L2, n / 2.0 + 1.0, Split::Low);
    let gamma_high = traj.besov_series(Channel::Gamma, PNorm::High, n / p, Split::High);

    // the two quadratic source integrals shared by every right-hand side
    let pq: Vec<f64> = (0..times.len())
        .map(|k| {
            (pair_low[k] + u_high_sub[k] + tau_high[k]) * (u_low_smooth[k] + u_high_smooth[k])
        })
        .collect();
    let rs: Vec<f64> = (0..times.len())
        .map(|k| (tau_low[k] + tau_high[k]) * (gamma_low_smooth[k] + gamma_high[k]))
        .collect();
    let int_pq = running_integral(times, &pq);
    let int_rs = running_integral(times, &rs);

    // initial data
    let pair0 = pair_low[0];
    let u0_high = u_high_sub[0];
    let tau0_high = tau_high[0];

    let len = times.len();
    let mut entries = Vec::new();

    // plain low-frequency energy bound
    {
        let lhs = sup_channel(traj, &stacked_rows(&traj.u_l2, &traj.tau_l2), s_low, Split::Low);
        let rhs: Vec<f64> = (0..len).map(|k| pair0 + int_pq[k]).collect();
        entries.push(ratio_entry("low_energy", &lhs, &rhs));
    }

    // weighted-energy bound in the effective variables, with smoothing
    {
        let pair_ug = stacked_rows(&traj.u_l2, &traj.gamma_l2);
        let sup = sup_channel(traj, &pair_ug, s_low, Split::Low);
        let smooth = integral_channel(traj, &pair_ug, n / 2.0 + 1.0, Split::Low);
        let lhs: Vec<f64> = (0..len).map(|k| sup[k] + smooth[k]).collect();
        let ug0 = traj.weighted_block_sum(
            &stacked_rows(&traj.u_l2[..1], &traj.gamma_l2[..1])[0],
            s_low,
            Split::Low,
        );
        let rhs: Vec<f64> = (0..len).map(|k| ug0 + int_pq[k]).collect();
        entries.push(ratio_entry("low_effective", &lhs, &rhs));
    }

    // combined low-frequency bound
    {
        let sup_pair = sup_channel(traj, &stacked_rows(&traj.u_l2, &traj.tau_l2), s_low, Split::Low);
        let sup_tau = sup_channel(traj, &traj.tau_l2, n / 2.0, Split::Low);
        let int_u = integral_channel(traj, &traj.u_l2, n / 2.0 + 1.0, Split::Low);
        let int_gamma = integral_channel(traj, &traj.gamma_l2, n / 2.0 + 1.0, Split::Low);
        let lhs: Vec<f64> =
            (0..len).map(|k| sup_pair[k] + sup_tau[k] + int_u[k] + int_gamma[k]).collect();
        let rhs: Vec<f64> = (0..len).map(|k| pair0 + int_pq[k]).collect();
        entries.push(ratio_entry("low_combined", &lhs, &rhs));
    }

    // combined high-frequency bound
    {
        let sup_u = sup_channel(traj, &traj.u_lp, n / p - 1.0, Split::High);
        let sup_tau = sup_channel(traj, &traj.tau_lp, n / p, Split::High);
        let int_gamma = integral_channel(traj, &traj.gamma_lp, n / p, Split::High);
        let int_u = integral_channel(traj, &traj.u_lp, n / p + 1.0, Split::High);
        let lhs: Vec<f64> =
            (0..len).map(|k| sup_u[k] + sup_tau[k] + int_gamma[k] + int_u[k]).collect();
        let rhs: Vec<f64> =
            (0..len).map(|k| u0_high + tau0_high + int_rs[k] + int_pq[k]).collect();
        entries.push(ratio_entry("high_combined", &lhs, &rhs));
    }

    // full closure
    {
        let xs = hybrid_functional(traj, p, traj.j0)?;
        let lhs: Vec<f64> = xs.iter().map(|s| s.total).collect();
        let rhs: Vec<f64> = (0..len)
            .map(|k| pair0 + u0_high + tau0_high + int_rs[k] + int_pq[k])
            .collect();
        entries.push(ratio_entry("closure", &lhs, &rhs));
    }

    Ok(ChainReport { entries })
}
