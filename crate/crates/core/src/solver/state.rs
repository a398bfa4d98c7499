//! The evolving state and the effective variables derived from it.

use crate::error::{Error, Result};
use crate::spectral::ops::{divergence, divergence_tensor, lambda_power, leray_project};
use crate::spectral::{Rank, SpectralField};

/// A point on a trajectory: time, divergence-free velocity, symmetric stress.
#[derive(Clone, Debug)]
pub struct State {
    pub t: f64,
    pub u: SpectralField,
    pub tau: SpectralField,
}

impl State {
    /// Validating constructor: checks ranks, grids, divergence, realness.
    pub fn new(t: f64, u: SpectralField, tau: SpectralField) -> Result<Self> {
        if u.rank() != Rank::Vector {
            return Err(Error::RankMismatch { expected: Rank::Vector, got: u.rank() });
        }
        if tau.rank() != Rank::SymTensor {
            return Err(Error::RankMismatch { expected: Rank::SymTensor, got: tau.rank() });
        }
        if u.grid() != tau.grid() {
            return Err(Error::GridMismatch);
        }
        let state = State { t, u, tau };
        let div = state.div_residual()?;
        if div > 1e-10 {
            return Err(Error::Precondition(format!(
                "velocity is not divergence-free (relative residual {div:.3e})"
            )));
        }
        for (name, f) in [("u", &state.u), ("tau", &state.tau)] {
            let res = f.conj_symmetry_residual();
            if res > 1e-10 {
                return Err(Error::Precondition(format!(
                    "{name} is not real-valued (conjugate-symmetry residual {res:.3e})"
                )));
            }
        }
        Ok(state)
    }

    /// Relative spectral divergence residual of the velocity.
    pub fn div_residual(&self) -> Result<f64> {
        let div = divergence(&self.u)?;
        let scale = self.u.spectral_max();
        Ok(if scale == 0.0 { 0.0 } else { div.spectral_max() / scale })
    }

    /// Relative asymmetry of the stress, reconstructed entrywise. Packed
    /// storage makes this identically zero; kept as a read-back check.
    pub fn sym_residual(&self) -> f64 {
        let grid = self.tau.grid();
        let dim = grid.dim();
        let mut worst = 0.0f64;
        let mut scale = 0.0f64;
        for flat in (0..grid.mode_count()).step_by(7) {
            for i in 0..dim {
                for j in 0..dim {
                    let a = self.tau.tensor_entry(i, j, flat);
                    let b = self.tau.tensor_entry(j, i, flat);
                    worst = worst.max((a - b).norm());
                    scale = scale.max(a.norm());
                }
            }
        }
        if scale == 0.0 {
            0.0
        } else {
            worst / scale
        }
    }

    /// Worst realness drift over both fields.
    pub fn realness_residual(&self) -> f64 {
        self.u.conj_symmetry_residual().max(self.tau.conj_symmetry_residual())
    }

    pub fn is_finite(&self) -> bool {
        self.u.is_finite() && self.tau.is_finite()
    }
}

/// The diagonalizing combinations of the linear system.
///
/// `gamma` is the dissipative component of the stress, `w = Lambda gamma - u`
/// closes the low-frequency weighted energy, and `g = u - Lambda^-1 gamma`
/// carries the parabolic smoothing at high frequency.
#[derive(Clone, Debug)]
pub struct EffectiveVariables {
    pub gamma: SpectralField,
    pub w: SpectralField,
    pub g: SpectralField,
}

/// `gamma = Lambda^-1 P div(tau)`, `w = Lambda gamma - u`,
/// `g = u - Lambda^-1 gamma`.
///
/// `div` annihilates the stress mean, so the negative power is always
/// well-posed here.
pub fn effective_variables(state: &State) -> Result<EffectiveVariables> {
    let gamma = gamma_of(&state.tau)?;
    let mut w = lambda_power(&gamma, 1.0)?;
    w.axpy(-1.0, &state.u)?;
    let mut g = state.u.clone();
    g.axpy(-1.0, &lambda_power(&gamma, -1.0)?)?;
    Ok(EffectiveVariables { gamma, w, g })
}

/// Just the dissipative stress component.
pub fn gamma_of(tau: &SpectralField) -> Result<SpectralField> {
    let div = divergence_tensor(tau)?;
    let projected = leray_project(&div)?;
    lambda_power(&projected, -1.0)
}
