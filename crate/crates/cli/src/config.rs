//! Config-file schema: flat key-value sections, TOML syntax.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use oldb_core::solver::{
    GridConfig, InitialConfig, InitialSpec, IntegratorConfig, OutputConfig, SimConfig,
};
use oldb_core::spectral::ConstitutiveParams;
use oldb_core::{Error, Result};

fn default_mu() -> f64 {
    1.0
}
fn default_cfl() -> f64 {
    0.5
}
fn default_true() -> bool {
    true
}
fn default_norm_every() -> usize {
    1
}
fn default_p_high() -> f64 {
    3.0
}
fn default_j0() -> i32 {
    2
}
fn default_band_top() -> i64 {
    2
}
fn default_one() -> f64 {
    1.0
}
fn default_half() -> f64 {
    0.5
}
fn default_kmin() -> i64 {
    1
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct GridSection {
    pub n: usize,
    pub points: usize,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(default)]
pub struct PhysicsSection {
    pub b: f64,
    pub mu: f64,
    pub k1: f64,
    pub k2: f64,
}

impl Default for PhysicsSection {
    fn default() -> Self {
        PhysicsSection { b: 0.0, mu: default_mu(), k1: 1.0, k2: 1.0 }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct IntegratorSection {
    pub dt: f64,
    pub t_end: f64,
    #[serde(default = "default_cfl")]
    pub cfl_safety: f64,
    #[serde(default = "default_true")]
    pub nonlinear: bool,
    #[serde(default = "default_true")]
    pub coupling: bool,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct InitialSection {
    pub kind: String,
    #[serde(default = "default_one")]
    pub amplitude_u: f64,
    #[serde(default = "default_one")]
    pub amplitude_tau: f64,
    #[serde(default = "default_kmin")]
    pub k_min: i64,
    #[serde(default = "default_band_top")]
    pub k_max: i64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(default = "default_half")]
    pub width: f64,
    #[serde(default = "default_one")]
    pub amplitude: f64,
    #[serde(default)]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub x0_target: Option<f64>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(default)]
pub struct OutputSection {
    pub norm_every: usize,
    pub state_every: usize,
    pub p_high: f64,
    pub j0: i32,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            norm_every: default_norm_every(),
            state_every: 0,
            p_high: default_p_high(),
            j0: default_j0(),
        }
    }
}

/// The whole config file.
#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct FileConfig {
    pub grid: GridSection,
    #[serde(default)]
    pub physics: PhysicsSection,
    pub integrator: IntegratorSection,
    pub initial: InitialSection,
    #[serde(default)]
    pub output: OutputSection,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<FileConfig> {
        let text = std::fs::read_to_string(path)?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// Resolve into the solver configuration.
    pub fn to_sim_config(&self) -> Result<SimConfig> {
        let spec = match self.initial.kind.as_str() {
            "random-band" => InitialSpec::RandomBand {
                amplitude_u: self.initial.amplitude_u,
                amplitude_tau: self.initial.amplitude_tau,
                k_min: self.initial.k_min,
                k_max: self.initial.k_max,
                seed: self.initial.seed,
            },
            "oscillating" => InitialSpec::Oscillating {
                epsilon: self.initial.epsilon.ok_or_else(|| {
                    Error::Config("oscillating initial data needs `epsilon`".into())
                })?,
                width: self.initial.width,
                amplitude: self.initial.amplitude,
            },
            "taylor-green" => InitialSpec::TaylorGreen { amplitude: self.initial.amplitude },
            "file" => InitialSpec::File {
                path: self
                    .initial
                    .path
                    .clone()
                    .ok_or_else(|| Error::Config("file initial data needs `path`".into()))?,
            },
            other => {
                return Err(Error::Config(format!(
                    "unknown initial kind `{other}` (expected random-band, oscillating, taylor-green, file)"
                )))
            }
        };
        let cfg = SimConfig {
            grid: GridConfig { dim: self.grid.n, points: self.grid.points },
            physics: ConstitutiveParams {
                b: self.physics.b,
                mu: self.physics.mu,
                k1: self.physics.k1,
                k2: self.physics.k2,
            },
            integrator: IntegratorConfig {
                dt: self.integrator.dt,
                t_end: self.integrator.t_end,
                cfl_safety: self.integrator.cfl_safety,
                nonlinear: self.integrator.nonlinear,
                coupling: self.integrator.coupling,
            },
            initial: InitialConfig { spec, x0_target: self.initial.x0_target },
            output: OutputConfig {
                norm_every: self.output.norm_every,
                state_every: self.output.state_every,
                p_high: self.output.p_high,
                j0: self.output.j0,
            },
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
