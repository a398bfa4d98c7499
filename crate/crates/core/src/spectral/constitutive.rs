//! The Oldroyd-B constitutive algebra.

use crate::error::{Error, Result};
use crate::spectral::field::sym_index;
use crate::spectral::ops::{dealias, expect_rank, sym_skew_parts};
use crate::spectral::{Rank, SpectralField};

/// Physical coefficients of the system.
///
/// `b` is the slip parameter of the bilinear stress form and must lie in
/// `[-1, 1]`; `b = 0` is the corotational case. `mu`, `k1`, `k2` are the
/// viscosity and the two coupling coefficients, all nonnegative and 1 by
/// default.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstitutiveParams {
    pub b: f64,
    pub mu: f64,
    pub k1: f64,
    pub k2: f64,
}

impl Default for ConstitutiveParams {
    fn default() -> Self {
        ConstitutiveParams { b: 0.0, mu: 1.0, k1: 1.0, k2: 1.0 }
    }
}

impl ConstitutiveParams {
    pub fn with_b(b: f64) -> Result<Self> {
        let p = ConstitutiveParams { b, ..Default::default() };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(-1.0..=1.0).contains(&self.b) || !self.b.is_finite() {
            return Err(Error::ParamOutOfRange(format!("b = {} outside [-1, 1]", self.b)));
        }
        for (name, v) in [("mu", self.mu), ("k1", self.k1), ("k2", self.k2)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::ParamOutOfRange(format!("{name} = {v} must be nonnegative")));
            }
        }
        Ok(())
    }
}

/// The bilinear stress form
/// `F(tau, grad u) = tau W - W tau + b (D tau + tau D)`
/// with `D`, `W` the symmetric and skew parts of the velocity gradient.
///
/// Evaluated pointwise in physical space and dealiased. The commutator with a
/// skew `W` and the anticommutator with a symmetric `D` both preserve
/// symmetry, so the result is packed symmetric by construction.
pub fn bilinear_f(tau: &SpectralField, u: &SpectralField, b: f64) -> Result<SpectralField> {
    if !(-1.0..=1.0).contains(&b) || !b.is_finite() {
        return Err(Error::ParamOutOfRange(format!("b = {b} outside [-1, 1]")));
    }
    expect_rank(tau, Rank::SymTensor)?;
    expect_rank(u, Rank::Vector)?;
    if tau.grid() != u.grid() {
        return Err(Error::GridMismatch);
    }
    let (d, w) = sym_skew_parts(u)?;
    bilinear_f_parts(tau, &d, &w, b)
}

/// Same as [`bilinear_f`] with precomputed `D` and `W` (one fewer gradient
/// pass when the caller already has them).
pub fn bilinear_f_parts(
    tau: &SpectralField,
    d: &SpectralField,
    w: &SpectralField,
    b: f64,
) -> Result<SpectralField> {
    let grid = tau.grid().clone();
    let dim = grid.dim();
    let modes = grid.mode_count();

    let (tr, _) = tau.to_real();
    let (dr, _) = d.to_real();
    let (wr, _) = w.to_real();

    let tau_at = |i: usize, j: usize, p: usize| tr[sym_index(dim, i, j) * modes + p];
    let d_at = |i: usize, j: usize, p: usize| dr[sym_index(dim, i, j) * modes + p];
    let w_at = |i: usize, j: usize, p: usize| wr[(i * dim + j) * modes + p];

    let comps = Rank::SymTensor.components(dim);
    let mut out = vec![0.0; comps * modes];
    for i in 0..dim {
        for j in i..dim {
            let slab = &mut out[sym_index(dim, i, j) * modes..(sym_index(dim, i, j) + 1) * modes];
            for (p, o) in slab.iter_mut().enumerate() {
                let mut acc = 0.0;
                for k in 0..dim {
                    acc += tau_at(i, k, p) * w_at(k, j, p) - w_at(i, k, p) * tau_at(k, j, p);
                    acc += b * (d_at(i, k, p) * tau_at(k, j, p) + tau_at(i, k, p) * d_at(k, j, p));
                }
                *o = acc;
            }
        }
    }
    let mut f = SpectralField::from_real(&grid, Rank::SymTensor, &out)?;
    dealias(&mut f);
    Ok(f)
}
