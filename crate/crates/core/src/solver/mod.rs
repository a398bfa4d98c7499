//! Time integration of the full system and everything needed to set a run
//! up: configuration, initial data, state bookkeeping, trajectory recording.

mod config;
mod initial;
mod state;
mod stepper;
mod trajectory;

pub use config::{
    GridConfig, InitialConfig, InitialSpec, IntegratorConfig, OutputConfig, SimConfig,
};
pub use initial::{
    initial_hybrid_norm, make_initial_data, oscillating_velocity, rescale_to_initial_norm,
};
pub use state::{effective_variables, gamma_of, EffectiveVariables, State};
pub use stepper::{max_speed, nonlinear_rhs, step, TermSwitches};
pub use trajectory::{
    running_integral, running_max, simulate, Channel, InvariantSample, PNorm, RunStatus,
    Trajectory,
};
