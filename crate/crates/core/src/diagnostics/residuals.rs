//! Exact-identity residuals: the stress/strain energy cancellation and the
//! transport orthogonality, per dyadic block.

use crate::dyadic::DyadicPartition;
use crate::error::{Error, Result};
use crate::solver::{effective_variables, State};
use crate::spectral::ops::{
    convect, divergence, divergence_tensor, l2_inner, leray_project, sym_skew_parts, tensor_inner,
};
use crate::spectral::{Rank, SpectralField};

fn require_divfree(u: &SpectralField) -> Result<()> {
    let div = divergence(u)?;
    let scale = u.spectral_max();
    if scale > 0.0 && div.spectral_max() > 1e-8 * scale {
        return Err(Error::Precondition("velocity must be divergence-free".into()));
    }
    Ok(())
}

/// `|<block_j P div tau, block_j u> + <block_j D(u), block_j tau>|`
/// normalized by `||block_j u|| ||block_j tau||` (0 when either factor
/// vanishes). Exactly zero in the continuum for divergence-free `u` and
/// symmetric `tau`; spectrally exact here up to roundoff.
pub fn cancellation_residual(state: &State, part: &DyadicPartition, j: i32) -> Result<f64> {
    require_divfree(&state.u)?;
    cancellation_residual_raw(&state.u, &state.tau, part, j)
}

/// A block whose norm sits at the roundoff floor of the whole field has
/// vanished for residual purposes; normalizing junk by junk reports noise.
const EMPTY_BLOCK: f64 = 1e-13;

/// Unchecked variant for probing what happens when the preconditions fail.
pub fn cancellation_residual_raw(
    u: &SpectralField,
    tau: &SpectralField,
    part: &DyadicPartition,
    j: i32,
) -> Result<f64> {
    if u.rank() != Rank::Vector {
        return Err(Error::RankMismatch { expected: Rank::Vector, got: u.rank() });
    }
    let bu = part.dyadic_block(u, j)?;
    let btau = part.dyadic_block(tau, j)?;
    if bu.l2_norm() <= EMPTY_BLOCK * u.l2_norm() || btau.l2_norm() <= EMPTY_BLOCK * tau.l2_norm()
    {
        return Ok(0.0);
    }
    let p_div_tau = leray_project(&divergence_tensor(tau)?)?;
    let (d, _) = sym_skew_parts(u)?;
    let b_pdiv = part.dyadic_block(&p_div_tau, j)?;
    let b_d = part.dyadic_block(&d, j)?;
    let lhs = l2_inner(&b_pdiv, &bu)? + tensor_inner(&b_d, &btau)?;
    let scale = bu.l2_norm() * btau.l2_norm();
    Ok(if scale == 0.0 { 0.0 } else { lhs.abs() / scale })
}

/// Which field the transport residual probes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransportTarget {
    U,
    Tau,
    Gamma,
    W,
}

/// `|<u.grad(block_j z), block_j z>| / (||u|| ||block_j z||^2)`, which
/// vanishes identically for divergence-free `u` (0 when the denominator
/// does). Products are dealiased; the strict dealias bound keeps the
/// discrete identity exact.
pub fn transport_residual(
    state: &State,
    part: &DyadicPartition,
    j: i32,
    target: TransportTarget,
) -> Result<f64> {
    require_divfree(&state.u)?;
    let z = match target {
        TransportTarget::U => state.u.clone(),
        TransportTarget::Tau => state.tau.clone(),
        TransportTarget::Gamma => effective_variables(state)?.gamma,
        TransportTarget::W => effective_variables(state)?.w,
    };
    transport_residual_raw(&state.u, &z, part, j)
}

/// Unchecked variant against an arbitrary advecting field.
pub fn transport_residual_raw(
    u: &SpectralField,
    z: &SpectralField,
    part: &DyadicPartition,
    j: i32,
) -> Result<f64> {
    let bz = part.dyadic_block(z, j)?;
    if bz.l2_norm() <= EMPTY_BLOCK * z.l2_norm() {
        return Ok(0.0);
    }
    let advected = convect(u, &bz)?;
    let lhs = l2_inner(&advected, &bz)?;
    let scale = u.l2_norm() * bz.l2_norm().powi(2);
    Ok(if scale == 0.0 { 0.0 } else { lhs.abs() / scale })
}
