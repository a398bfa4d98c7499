//! Per-block energy bookkeeping along a trajectory.
//!
//! For one dyadic block the discrete system satisfies exactly
//!
//! ```text
//! d/dt E_j = -mu ||grad block_j u||^2
//!            + k1 <block_j P div tau, block_j u> + k2 <block_j D(u), block_j tau>
//!            + <[u.grad, block_j P] u, block_j u> + <[u.grad, block_j] tau, block_j tau>
//!            - <block_j F(tau, grad u), block_j tau>
//! ```
//!
//! with `E_j = (||block_j u||^2 + ||block_j tau||^2) / 2`; the exchange pair
//! cancels when `k1 = k2`. The ledger evaluates every term from snapshots and
//! compares against a centered finite difference of `E_j`.

use crate::dyadic::DyadicPartition;
use crate::error::{Error, Result};
use crate::solver::State;
use crate::spectral::ops::{
    convect, divergence_tensor, l2_inner, lambda_power, leray_project, sym_skew_parts,
};
use crate::spectral::{bilinear_f_parts, ConstitutiveParams};

#[derive(Clone, Copy, Debug)]
pub struct LedgerRow {
    pub t: f64,
    /// Centered finite difference of the block energy.
    pub dedt_fd: f64,
    /// `mu ||grad block_j u||^2` (enters the balance negated).
    pub viscous: f64,
    /// The stress/strain exchange pair; zero when `k1 = k2`.
    pub exchange: f64,
    pub comm_u: f64,
    pub comm_tau: f64,
    /// `-<block_j F, block_j tau>`.
    pub f_term: f64,
    /// `dedt_fd - (-viscous + exchange + comm_u + comm_tau + f_term)`.
    pub residual: f64,
    /// Residual relative to the largest participating term.
    pub rel_residual: f64,
    /// Set when the finite-difference cadence is too coarse to trust.
    pub warn: bool,
    /// `||grad block_j u||^2 / (2^{2j} ||block_j u||^2)`; confined to
    /// `[(3/4)^2, (8/3)^2]` by the annulus support.
    pub bernstein_c1: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct EnergyLedger {
    pub j: i32,
    pub rows: Vec<LedgerRow>,
}

impl EnergyLedger {
    pub fn worst_rel_residual(&self) -> f64 {
        self.rows.iter().map(|r| r.rel_residual).fold(0.0, f64::max)
    }
}

/// Build the ledger for block `j` from dense snapshots. `nonlinear` must
/// match the switches the trajectory was generated with. Needs at least
/// three snapshots; the first and last carry no finite difference and are
/// skipped.
pub fn block_energy_balance(
    states: &[State],
    part: &DyadicPartition,
    j: i32,
    params: &ConstitutiveParams,
    nonlinear: bool,
) -> Result<EnergyLedger> {
    if states.len() < 3 {
        return Err(Error::SeriesTooShort { len: states.len() });
    }
    let energies: Vec<f64> = states
        .iter()
        .map(|s| -> Result<f64> {
            let bu = part.dyadic_block(&s.u, j)?;
            let btau = part.dyadic_block(&s.tau, j)?;
            Ok(0.5 * (bu.l2_norm().powi(2) + btau.l2_norm().powi(2)))
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::with_capacity(states.len().saturating_sub(2));
    for k in 1..states.len() - 1 {
        let s = &states[k];
        let h = states[k + 1].t - states[k - 1].t;
        let dedt_fd = (energies[k + 1] - energies[k - 1]) / h;

        let bu = part.dyadic_block(&s.u, j)?;
        let btau = part.dyadic_block(&s.tau, j)?;

        let grad_sq = lambda_power(&bu, 1.0)?.l2_norm().powi(2);
        let viscous = params.mu * grad_sq;
        let u_sq = bu.l2_norm().powi(2);
        let bernstein_c1 =
            if u_sq > 0.0 { Some(grad_sq / ((2.0 * j as f64).exp2() * u_sq)) } else { None };

        let p_div_tau = leray_project(&divergence_tensor(&s.tau)?)?;
        let (d, w) = sym_skew_parts(&s.u)?;
        let exchange = params.k1 * l2_inner(&part.dyadic_block(&p_div_tau, j)?, &bu)?
            + params.k2 * l2_inner(&part.dyadic_block(&d, j)?, &btau)?;

        let (comm_u, comm_tau, f_term) = if nonlinear {
            let adv_u = leray_project(&convect(&s.u, &s.u)?)?;
            let cu = convect(&s.u, &bu)?.sub(&part.dyadic_block(&adv_u, j)?)?;
            let adv_tau = convect(&s.u, &s.tau)?;
            let ct = convect(&s.u, &btau)?.sub(&part.dyadic_block(&adv_tau, j)?)?;
            let f = bilinear_f_parts(&s.tau, &d, &w, params.b)?;
            (
                l2_inner(&cu, &bu)?,
                l2_inner(&ct, &btau)?,
                -l2_inner(&part.dyadic_block(&f, j)?, &btau)?,
            )
        } else {
            (0.0, 0.0, 0.0)
        };

        let rhs = -viscous + exchange + comm_u + comm_tau + f_term;
        let residual = dedt_fd - rhs;
        let scale = [dedt_fd.abs(), viscous, exchange.abs(), comm_u.abs(), comm_tau.abs(), f_term.abs()]
            .into_iter()
            .fold(0.0f64, f64::max);
        let rel_residual = if scale > 0.0 { residual.abs() / scale } else { 0.0 };
        rows.push(LedgerRow {
            t: s.t,
            dedt_fd,
            viscous,
            exchange,
            comm_u,
            comm_tau,
            f_term,
            residual,
            rel_residual,
            warn: rel_residual > 0.01,
            bernstein_c1,
        });
    }
    Ok(EnergyLedger { j, rows })
}
