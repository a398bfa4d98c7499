//! Initial data construction.

use std::f64::consts::PI;

use crate::dyadic::{besov_norm, BesovSpec, DyadicPartition, Split};
use crate::error::{Error, Result};
use crate::random;
use crate::solver::config::InitialSpec;
use crate::solver::state::State;
use crate::spectral::ops::{dealias, leray_project};
use crate::spectral::{snapshot, Grid, Rank, SpectralField};

/// Periodized Gaussian bump centered at `pi`, one factor per axis.
fn bump_1d(y: f64, width: f64) -> f64 {
    let mut acc = 0.0;
    for m in -3..=3 {
        let d = y - PI - 2.0 * PI * m as f64;
        acc += (-d * d / (2.0 * width * width)).exp();
    }
    acc
}

/// `amplitude * sin(x_1 / epsilon) * bump(x) * e_n`, Leray projected and
/// dealiased. `1/epsilon` must be (close to) a positive integer frequency
/// inside the dealiased band, so the oscillation is exactly representable.
pub fn oscillating_velocity(
    grid: &Grid,
    epsilon: f64,
    width: f64,
    amplitude: f64,
) -> Result<SpectralField> {
    if !(epsilon > 0.0) {
        return Err(Error::Config(format!("epsilon = {epsilon} must be positive")));
    }
    let k_real = 1.0 / epsilon;
    let k = k_real.round();
    if (k_real - k).abs() > 1e-9 * k_real.max(1.0) || k < 1.0 {
        return Err(Error::Config(format!(
            "oscillation frequency 1/epsilon = {k_real} is not a positive integer grid frequency"
        )));
    }
    if k as i64 > grid.dealias_bound() {
        return Err(Error::Config(format!(
            "oscillation frequency {k} exceeds the dealiased band ({})",
            grid.dealias_bound()
        )));
    }
    let dim = grid.dim();
    let last = dim - 1;
    let raw = SpectralField::from_fn(grid, Rank::Vector, |x, c| {
        if c == last {
            let env: f64 = x.iter().map(|&xi| bump_1d(xi, width)).product();
            amplitude * (k * x[0]).sin() * env
        } else {
            0.0
        }
    });
    let mut u = leray_project(&raw)?;
    dealias(&mut u);
    Ok(u)
}

fn taylor_green(grid: &Grid, amplitude: f64) -> SpectralField {
    match grid.dim() {
        2 => SpectralField::from_fn(grid, Rank::Vector, |x, c| match c {
            0 => amplitude * x[0].sin() * x[1].cos(),
            _ => -amplitude * x[0].cos() * x[1].sin(),
        }),
        _ => SpectralField::from_fn(grid, Rank::Vector, |x, c| match c {
            0 => amplitude * x[0].sin() * x[1].cos() * x[2].cos(),
            1 => -amplitude * x[0].cos() * x[1].sin() * x[2].cos(),
            _ => 0.0,
        }),
    }
}

/// Build the initial state for a spec. Velocities come out divergence-free
/// and dealiased; stresses symmetric (by storage) and dealiased.
pub fn make_initial_data(grid: &Grid, spec: &InitialSpec) -> Result<State> {
    let (u, tau) = match spec {
        InitialSpec::RandomBand { amplitude_u, amplitude_tau, k_min, k_max, seed } => {
            if *k_max > grid.points() as i64 / 2 - 1 {
                return Err(Error::Config(format!(
                    "band top {k_max} exceeds the grid's resolvable frequencies"
                )));
            }
            let mut u = random::divfree_field(grid, *k_min, *k_max, *seed);
            let nu = u.l2_norm();
            if nu > 0.0 {
                u.scale(amplitude_u / nu);
            }
            let mut tau = random::symtensor_field(grid, *k_min, *k_max, seed.wrapping_add(1));
            let nt = tau.l2_norm();
            if nt > 0.0 {
                tau.scale(amplitude_tau / nt);
            }
            dealias(&mut u);
            dealias(&mut tau);
            (u, tau)
        }
        InitialSpec::Oscillating { epsilon, width, amplitude } => {
            let u = oscillating_velocity(grid, *epsilon, *width, *amplitude)?;
            (u, SpectralField::zeros(grid, Rank::SymTensor))
        }
        InitialSpec::TaylorGreen { amplitude } => {
            let mut u = taylor_green(grid, *amplitude);
            dealias(&mut u);
            (u, SpectralField::zeros(grid, Rank::SymTensor))
        }
        InitialSpec::File { path } => {
            let (u, tau) = snapshot::read_state_fields(path)?;
            if u.grid() != grid {
                return Err(Error::Config(format!(
                    "snapshot grid {}^{} does not match the configured {}^{}",
                    u.grid().points(),
                    u.grid().dim(),
                    grid.points(),
                    grid.dim()
                )));
            }
            (leray_project(&u)?, tau)
        }
    };
    State::new(0.0, u, tau)
}

/// The initial value of the hybrid functional:
/// low-frequency norm of the stacked pair plus the two high-frequency norms.
pub fn initial_hybrid_norm(state: &State, part: &DyadicPartition, p: f64) -> Result<f64> {
    let n = part.grid().dim() as f64;
    let u_l2 = part.block_l2_norms(&state.u);
    let tau_l2 = part.block_l2_norms(&state.tau);
    let stacked: Vec<f64> =
        u_l2.iter().zip(&tau_l2).map(|(a, b)| (a * a + b * b).sqrt()).collect();
    let low_pair =
        crate::dyadic::besov_from_block_norms(part, &stacked, n / 2.0 - 1.0, Split::Low);
    let u_high = besov_norm(part, &state.u, BesovSpec::new(n / p - 1.0, p)?, Split::High);
    let tau_high = besov_norm(part, &state.tau, BesovSpec::new(n / p, p)?, Split::High);
    Ok(low_pair + u_high + tau_high)
}

/// Scale `(u0, tau0)` so the initial hybrid functional hits `target`
/// (every channel is 1-homogeneous). Returns the scaled state and the norm
/// before scaling.
pub fn rescale_to_initial_norm(
    state: State,
    part: &DyadicPartition,
    p: f64,
    target: f64,
) -> Result<(State, f64)> {
    let x0 = initial_hybrid_norm(&state, part, p)?;
    if x0 == 0.0 {
        return Err(Error::DegenerateInput("cannot rescale identically zero data".into()));
    }
    let factor = target / x0;
    let mut u = state.u;
    let mut tau = state.tau;
    u.scale(factor);
    tau.scale(factor);
    Ok((State::new(state.t, u, tau)?, x0))
}
