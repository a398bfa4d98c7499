//! Empirical ratio probes for the product and commutator estimates.
//!
//! Each probe evaluates `LHS / RHS` of an inequality with constant 1; the
//! distribution of the ratio over randomized inputs is the observed constant.
//! Nothing here asserts a bound, it only measures.

use crate::dyadic::besov::{besov_norm, BesovSpec, Split};
use crate::dyadic::DyadicPartition;
use crate::error::{Error, Result};
use crate::spectral::ops::{convect, divergence, jacobian, lp_norm, multiply};
use crate::spectral::{Rank, SpectralField};

/// Which inequality to probe.
#[derive(Clone, Copy, Debug)]
pub enum InequalityKind {
    /// `||uv||_{B^{n/2-1}_{2,1}} <= C (||u||_{B^{n/p-1}} ||v||_{B^{n/p}}
    ///  + ||u||_{B^{n/p}} ||v||_{B^{n/p-1}})`, scalars, `2 <= p < 4`.
    ProductLaw { p: f64 },
    /// Blockwise transport commutator, summed against `2^{js}`:
    /// `sum_j 2^{js} ||[u.grad, block_j] v||_{L^p}
    ///  <= C ||grad u||_{B^{n/p}_{p,1}} ||v||_{B^s_{p,1}}`,
    /// `u` divergence-free, `-1 - n min(1/p, 1 - 1/p) < s <= 1 + n/p`.
    CommutatorBlock { p: f64, s: f64 },
    /// Low-frequency mixed-exponent commutator:
    /// `sum_{j <= j0} 2^{j(n/2-1)} ||[block_j, u.grad] v||_{L^2}
    ///  <= C ||grad u||_{B^{n/p}_{p,1}} (||v_low||_{B^{n/2-1}_{2,1}}
    ///     + ||v_high||_{B^{n/p-1}_{p,1}})`,
    /// `u` divergence-free, `2 <= p < 4`.
    CommutatorLowFreq { p: f64 },
}

fn require_divfree(u: &SpectralField) -> Result<()> {
    let div = divergence(u)?;
    let scale = u.spectral_max();
    if scale > 0.0 && div.spectral_max() > 1e-8 * scale {
        return Err(Error::Precondition(
            "velocity must be divergence-free for commutator probes".into(),
        ));
    }
    Ok(())
}

/// Evaluate one inequality ratio. Zero numerators report 0; a vanishing
/// right-hand side with a nonzero left-hand side reports infinity.
pub fn inequality_ratio(
    part: &DyadicPartition,
    kind: InequalityKind,
    u: &SpectralField,
    v: &SpectralField,
) -> Result<f64> {
    let n = part.grid().dim() as f64;
    match kind {
        InequalityKind::ProductLaw { p } => {
            if !(2.0..4.0).contains(&p) {
                return Err(Error::ParamOutOfRange(format!(
                    "product law requires 2 <= p < 4, got {p}"
                )));
            }
            if u.rank() != Rank::Scalar || v.rank() != Rank::Scalar {
                return Err(Error::RankMismatch { expected: Rank::Scalar, got: u.rank() });
            }
            let uv = multiply(u, v)?;
            let lhs = besov_norm(part, &uv, BesovSpec::new(n / 2.0 - 1.0, 2.0)?, Split::Full);
            let lo = BesovSpec::new(n / p - 1.0, p)?;
            let hi = BesovSpec::new(n / p, p)?;
            let rhs = besov_norm(part, u, lo, Split::Full) * besov_norm(part, v, hi, Split::Full)
                + besov_norm(part, u, hi, Split::Full) * besov_norm(part, v, lo, Split::Full);
            Ok(safe_ratio(lhs, rhs))
        }
        InequalityKind::CommutatorBlock { p, s } => {
            if !(p >= 1.0) {
                return Err(Error::ParamOutOfRange(format!("p = {p} must be >= 1")));
            }
            let s_low = -1.0 - n * (1.0 / p).min(1.0 - 1.0 / p);
            let s_high = 1.0 + n / p;
            if s <= s_low || s > s_high {
                return Err(Error::ParamOutOfRange(format!(
                    "commutator regularity must satisfy {s_low} < s <= {s_high}, got {s}"
                )));
            }
            require_divfree(u)?;
            let conv = convect(u, v)?;
            let mut lhs = 0.0;
            for j in part.blocks() {
                let a = convect(u, &part.dyadic_block(v, j)?)?;
                let b = part.dyadic_block(&conv, j)?;
                let comm = a.sub(&b)?;
                lhs += (j as f64 * s).exp2() * lp_norm(&comm, p);
            }
            let grad_u = jacobian(u)?;
            let rhs = besov_norm(part, &grad_u, BesovSpec::new(n / p, p)?, Split::Full)
                * besov_norm(part, v, BesovSpec::new(s, p)?, Split::Full);
            Ok(safe_ratio(lhs, rhs))
        }
        InequalityKind::CommutatorLowFreq { p } => {
            if !(2.0..4.0).contains(&p) {
                return Err(Error::ParamOutOfRange(format!(
                    "low-frequency commutator requires 2 <= p < 4, got {p}"
                )));
            }
            require_divfree(u)?;
            let conv = convect(u, v)?;
            let mut lhs = 0.0;
            for j in part.blocks() {
                if j > part.j0() {
                    continue;
                }
                let a = part.dyadic_block(&conv, j)?;
                let b = convect(u, &part.dyadic_block(v, j)?)?;
                let comm = a.sub(&b)?;
                lhs += (j as f64 * (n / 2.0 - 1.0)).exp2() * lp_norm(&comm, 2.0);
            }
            let grad_u = jacobian(u)?;
            let rhs = besov_norm(part, &grad_u, BesovSpec::new(n / p, p)?, Split::Full)
                * (besov_norm(part, v, BesovSpec::new(n / 2.0 - 1.0, 2.0)?, Split::Low)
                    + besov_norm(part, v, BesovSpec::new(n / p - 1.0, p)?, Split::High));
            Ok(safe_ratio(lhs, rhs))
        }
    }
}

fn safe_ratio(lhs: f64, rhs: f64) -> f64 {
    if lhs == 0.0 {
        0.0
    } else {
        lhs / rhs
    }
}
