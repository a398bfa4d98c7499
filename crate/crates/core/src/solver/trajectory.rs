//! Trajectory recording and the simulation driver.

use crate::dyadic::{DyadicPartition, Split};
use crate::error::{Error, Result};
use crate::solver::config::SimConfig;
use crate::solver::initial::{initial_hybrid_norm, make_initial_data, rescale_to_initial_norm};
use crate::solver::state::{gamma_of, State};
use crate::solver::stepper::{step, TermSwitches};
use crate::spectral::Grid;

/// How a run ended.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RunStatus {
    Completed,
    /// The solution lost finiteness; the trajectory holds everything
    /// recorded before that time.
    BlowUp { t: f64 },
}

/// Recorded fields.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Channel {
    U,
    Tau,
    Gamma,
}

/// Which integrability the recorded block norms carry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PNorm {
    L2,
    /// The configured high-frequency exponent.
    High,
}

/// One invariant audit row.
#[derive(Clone, Copy, Debug)]
pub struct InvariantSample {
    pub t: f64,
    pub div: f64,
    pub sym: f64,
    pub realness: f64,
}

/// Norm series, sparse state snapshots and invariant audits from one run.
///
/// Block norms are stored as `[time][block]` matrices per channel; every
/// Besov-type quantity the diagnostics need is a weighted block sum over
/// these.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub dim: usize,
    pub p_high: f64,
    pub j0: i32,
    pub j_min: i32,
    pub j_max: i32,
    pub times: Vec<f64>,
    pub u_l2: Vec<Vec<f64>>,
    pub tau_l2: Vec<Vec<f64>>,
    pub gamma_l2: Vec<Vec<f64>>,
    pub u_lp: Vec<Vec<f64>>,
    pub tau_lp: Vec<Vec<f64>>,
    pub gamma_lp: Vec<Vec<f64>>,
    pub invariants: Vec<InvariantSample>,
    /// Sparse full states (always includes the initial and final ones).
    pub states: Vec<State>,
    pub status: RunStatus,
    /// The initial hybrid norm (after any rescaling).
    pub x0: f64,
}

impl Trajectory {
    fn new(part: &DyadicPartition, p_high: f64) -> Self {
        Trajectory {
            dim: part.grid().dim(),
            p_high,
            j0: part.j0(),
            j_min: part.j_min(),
            j_max: part.j_max(),
            times: Vec::new(),
            u_l2: Vec::new(),
            tau_l2: Vec::new(),
            gamma_l2: Vec::new(),
            u_lp: Vec::new(),
            tau_lp: Vec::new(),
            gamma_lp: Vec::new(),
            invariants: Vec::new(),
            states: Vec::new(),
            status: RunStatus::Completed,
            x0: 0.0,
        }
    }

    fn record(&mut self, part: &DyadicPartition, state: &State) -> Result<()> {
        let gamma = gamma_of(&state.tau)?;
        self.times.push(state.t);
        self.u_l2.push(part.block_l2_norms(&state.u));
        self.tau_l2.push(part.block_l2_norms(&state.tau));
        self.gamma_l2.push(part.block_l2_norms(&gamma));
        self.u_lp.push(part.block_lp_norms(&state.u, self.p_high));
        self.tau_lp.push(part.block_lp_norms(&state.tau, self.p_high));
        self.gamma_lp.push(part.block_lp_norms(&gamma, self.p_high));
        self.invariants.push(InvariantSample {
            t: state.t,
            div: state.div_residual()?,
            sym: state.sym_residual(),
            realness: state.realness_residual(),
        });
        Ok(())
    }

    pub fn block_count(&self) -> usize {
        (self.j_max - self.j_min + 1) as usize
    }

    pub fn sample_count(&self) -> usize {
        self.times.len()
    }

    pub fn block_series(&self, ch: Channel, p: PNorm) -> &Vec<Vec<f64>> {
        match (ch, p) {
            (Channel::U, PNorm::L2) => &self.u_l2,
            (Channel::Tau, PNorm::L2) => &self.tau_l2,
            (Channel::Gamma, PNorm::L2) => &self.gamma_l2,
            (Channel::U, PNorm::High) => &self.u_lp,
            (Channel::Tau, PNorm::High) => &self.tau_lp,
            (Channel::Gamma, PNorm::High) => &self.gamma_lp,
        }
    }

    /// Weighted block sum `sum_j 2^{js} norms[j]` over a split, using the
    /// recorded block range (no partition object needed).
    pub fn weighted_block_sum(&self, row: &[f64], s: f64, split: Split) -> f64 {
        self.weighted_block_sum_at(row, s, split, self.j0)
    }

    /// Same with an explicit split index.
    pub fn weighted_block_sum_at(&self, row: &[f64], s: f64, split: Split, j0: i32) -> f64 {
        debug_assert_eq!(row.len(), self.block_count());
        row.iter()
            .enumerate()
            .filter(|(idx, _)| split.contains(self.j_min + *idx as i32, j0))
            .map(|(idx, &v)| ((self.j_min + idx as i32) as f64 * s).exp2() * v)
            .sum()
    }

    /// Instantaneous Besov norm series for one channel.
    pub fn besov_series(&self, ch: Channel, p: PNorm, s: f64, split: Split) -> Vec<f64> {
        self.block_series(ch, p)
            .iter()
            .map(|row| self.weighted_block_sum(row, s, split))
            .collect()
    }

    /// Besov series of the stacked pair `sqrt(a^2 + b^2)` per block.
    pub fn pair_besov_series(
        &self,
        a: Channel,
        b: Channel,
        p: PNorm,
        s: f64,
        split: Split,
    ) -> Vec<f64> {
        let sa = self.block_series(a, p);
        let sb = self.block_series(b, p);
        sa.iter()
            .zip(sb)
            .map(|(ra, rb)| {
                let stacked: Vec<f64> =
                    ra.iter().zip(rb).map(|(x, y)| (x * x + y * y).sqrt()).collect();
                self.weighted_block_sum(&stacked, s, split)
            })
            .collect()
    }

    /// Rebuild the partition this trajectory was recorded with.
    pub fn partition(&self, grid: &Grid) -> Result<DyadicPartition> {
        let part = DyadicPartition::new(grid, self.j0)?;
        if part.j_min() != self.j_min || part.j_max() != self.j_max {
            return Err(Error::Config("grid does not match the recorded block range".into()));
        }
        Ok(part)
    }

    pub fn final_state(&self) -> Option<&State> {
        self.states.last()
    }
}

/// Running maximum of a series.
pub fn running_max(values: &[f64]) -> Vec<f64> {
    let mut acc = 0.0f64;
    values
        .iter()
        .map(|&v| {
            acc = acc.max(v);
            acc
        })
        .collect()
}

/// Cumulative trapezoid integral of a sampled function.
pub fn running_integral(times: &[f64], values: &[f64]) -> Vec<f64> {
    assert_eq!(times.len(), values.len());
    let mut out = Vec::with_capacity(times.len());
    let mut acc = 0.0;
    for k in 0..times.len() {
        if k > 0 {
            acc += 0.5 * (values[k] + values[k - 1]) * (times[k] - times[k - 1]);
        }
        out.push(acc);
    }
    out
}

/// Run a full simulation.
///
/// Norm series are recorded every `output.norm_every` steps (plus the first
/// and last states), full snapshots every `output.state_every`. A blow-up
/// flags the trajectory and stops stepping; every other failure propagates.
pub fn simulate(cfg: &SimConfig) -> Result<Trajectory> {
    cfg.validate()?;
    let grid = Grid::new(cfg.grid.dim, cfg.grid.points)?;
    let part = DyadicPartition::new(&grid, cfg.output.j0)?;
    let mut state = make_initial_data(&grid, &cfg.initial.spec)?;
    if let Some(target) = cfg.initial.x0_target {
        let (scaled, _) = rescale_to_initial_norm(state, &part, cfg.output.p_high, target)?;
        state = scaled;
    }

    let terms = TermSwitches::from(&cfg.integrator);
    let (steps, dt) = cfg.step_plan();

    let mut traj = Trajectory::new(&part, cfg.output.p_high);
    traj.x0 = initial_hybrid_norm(&state, &part, cfg.output.p_high)?;
    traj.record(&part, &state)?;
    traj.states.push(state.clone());

    for k in 1..=steps {
        match step(&state, dt, &cfg.physics, terms, cfg.integrator.cfl_safety) {
            Ok(next) => state = next,
            Err(Error::BlowUp { t, .. }) => {
                traj.status = RunStatus::BlowUp { t };
                break;
            }
            Err(other) => return Err(other),
        }
        let at_end = k == steps;
        if at_end || (cfg.output.norm_every > 0 && k % cfg.output.norm_every == 0) {
            traj.record(&part, &state)?;
        }
        if at_end || (cfg.output.state_every > 0 && k % cfg.output.state_every == 0) {
            traj.states.push(state.clone());
        }
    }
    Ok(traj)
}
