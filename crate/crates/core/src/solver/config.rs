//! Simulation configuration.

use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::spectral::ConstitutiveParams;

#[derive(Clone, Debug, PartialEq)]
pub struct GridConfig {
    pub dim: usize,
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntegratorConfig {
    pub dt: f64,
    pub t_end: f64,
    /// Advective CFL safety factor, checked every step.
    pub cfl_safety: f64,
    /// Advection and the bilinear stress form; the linear coupling stays on.
    pub nonlinear: bool,
    /// The `k1 div tau` and `k2 D(u)` exchange terms.
    pub coupling: bool,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig { dt: 1e-2, t_end: 1.0, cfl_safety: 0.5, nonlinear: true, coupling: true }
    }
}

/// How to build the initial state.
#[derive(Clone, Debug, PartialEq)]
pub enum InitialSpec {
    /// Seeded Gaussian modes on `k_min <= |xi| <= k_max`, velocity Leray
    /// projected, stress symmetric; amplitudes are `L^2` norms.
    RandomBand { amplitude_u: f64, amplitude_tau: f64, k_min: i64, k_max: i64, seed: u64 },
    /// `u0 = amplitude sin(x_1/epsilon) bump(x) e_n`, Leray projected,
    /// `tau0 = 0`. `1/epsilon` must be a positive integer the grid resolves.
    Oscillating { epsilon: f64, width: f64, amplitude: f64 },
    /// Classical cellular vortex, `tau0 = 0`.
    TaylorGreen { amplitude: f64 },
    /// Read a `(u, tau)` snapshot.
    File { path: PathBuf },
}

#[derive(Clone, Debug, PartialEq)]
pub struct InitialConfig {
    pub spec: InitialSpec,
    /// When set, rescale `(u0, tau0)` so the initial hybrid functional
    /// equals this value.
    pub x0_target: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OutputConfig {
    /// Record norm series every this many steps (0 disables interior samples;
    /// the initial and final states are always recorded).
    pub norm_every: usize,
    /// Keep full state snapshots every this many steps (0 keeps only the
    /// first and last).
    pub state_every: usize,
    /// High-frequency integrability exponent for recorded block norms.
    pub p_high: f64,
    /// Low/high split index.
    pub j0: i32,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { norm_every: 1, state_every: 0, p_high: 3.0, j0: 2 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub grid: GridConfig,
    pub physics: ConstitutiveParams,
    pub integrator: IntegratorConfig,
    pub initial: InitialConfig,
    pub output: OutputConfig,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        self.physics.validate()?;
        let i = &self.integrator;
        if !(i.dt > 0.0) || !i.dt.is_finite() {
            return Err(Error::Config(format!("dt = {} must be positive", i.dt)));
        }
        if !(i.t_end > 0.0) || !i.t_end.is_finite() {
            return Err(Error::Config(format!("t_end = {} must be positive", i.t_end)));
        }
        if !(i.cfl_safety > 0.0) {
            return Err(Error::Config("cfl_safety must be positive".into()));
        }
        if !(self.output.p_high >= 1.0) {
            return Err(Error::Config(format!("p_high = {} must be >= 1", self.output.p_high)));
        }
        if let Some(x0) = self.initial.x0_target {
            if !(x0 > 0.0) {
                return Err(Error::Config(format!("x0_target = {x0} must be positive")));
            }
        }
        match &self.initial.spec {
            InitialSpec::RandomBand { amplitude_u, amplitude_tau, k_min, k_max, .. } => {
                if *k_min < 1 || k_max < k_min {
                    return Err(Error::Config(format!(
                        "band [{k_min}, {k_max}] must satisfy 1 <= k_min <= k_max"
                    )));
                }
                if !(*amplitude_u >= 0.0) || !(*amplitude_tau >= 0.0) {
                    return Err(Error::Config("band amplitudes must be nonnegative".into()));
                }
            }
            InitialSpec::Oscillating { epsilon, width, amplitude } => {
                if !(*epsilon > 0.0) || !(*width > 0.0) || !(*amplitude > 0.0) {
                    return Err(Error::Config(
                        "oscillating data needs positive epsilon, width, amplitude".into(),
                    ));
                }
            }
            InitialSpec::TaylorGreen { amplitude } => {
                if !(*amplitude > 0.0) {
                    return Err(Error::Config("taylor-green amplitude must be positive".into()));
                }
            }
            InitialSpec::File { .. } => {}
        }
        Ok(())
    }

    /// Number of steps and the (slightly adjusted) step size that lands
    /// exactly on `t_end`.
    pub fn step_plan(&self) -> (usize, f64) {
        let raw = self.integrator.t_end / self.integrator.dt;
        let steps = raw.round().max(1.0) as usize;
        let steps = if (steps as f64) < raw - 1e-9 { steps + 1 } else { steps };
        (steps, self.integrator.t_end / steps as f64)
    }
}
