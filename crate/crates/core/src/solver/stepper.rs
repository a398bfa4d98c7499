//! Time integration: exact viscous factor, explicit second-order
//! Runge-Kutta for everything else.

use crate::error::{Error, Result};
use crate::solver::config::IntegratorConfig;
use crate::solver::state::State;
use crate::spectral::ops::{
    advect_conservative, divergence_tensor, leray_project, sym_skew_parts,
};
use crate::spectral::{bilinear_f_parts, ConstitutiveParams, Rank, SpectralField};

/// Which terms the stepper advances explicitly.
#[derive(Clone, Copy, Debug)]
pub struct TermSwitches {
    /// Advection and the bilinear stress form.
    pub nonlinear: bool,
    /// The `k1 div tau` / `k2 D(u)` exchange.
    pub coupling: bool,
}

impl From<&IntegratorConfig> for TermSwitches {
    fn from(cfg: &IntegratorConfig) -> Self {
        TermSwitches { nonlinear: cfg.nonlinear, coupling: cfg.coupling }
    }
}

/// Everything on the right-hand side except the viscous term; the velocity
/// part is Leray projected.
pub(crate) fn explicit_rhs(
    u: &SpectralField,
    tau: &SpectralField,
    params: &ConstitutiveParams,
    terms: TermSwitches,
) -> Result<(SpectralField, SpectralField)> {
    let grid = u.grid().clone();
    let mut du = SpectralField::zeros(&grid, Rank::Vector);
    let mut dtau = SpectralField::zeros(&grid, Rank::SymTensor);

    if terms.coupling || terms.nonlinear {
        let (d, w) = sym_skew_parts(u)?;
        if terms.coupling {
            du.axpy(params.k1, &divergence_tensor(tau)?)?;
            dtau.axpy(params.k2, &d)?;
        }
        if terms.nonlinear {
            du.axpy(-1.0, &advect_conservative(u, u)?)?;
            dtau.axpy(-1.0, &advect_conservative(u, tau)?)?;
            dtau.axpy(-1.0, &bilinear_f_parts(tau, &d, &w, params.b)?)?;
        }
    }

    let du = leray_project(&du)?;
    Ok((du, dtau))
}

/// Full tendencies of the system, viscous term included:
///
/// * `du/dt = P(-u.grad(u) + k1 div tau) + mu Lap(u)`
/// * `dtau/dt = -u.grad(tau) - F(tau, grad u) + k2 D(u)`
///
/// With `nonlinear = false` the advection and `F` terms are dropped; the
/// linear exchange stays.
pub fn nonlinear_rhs(
    state: &State,
    params: &ConstitutiveParams,
    nonlinear: bool,
) -> Result<(SpectralField, SpectralField)> {
    params.validate()?;
    let terms = TermSwitches { nonlinear, coupling: true };
    let (mut du, dtau) = explicit_rhs(&state.u, &state.tau, params, terms)?;
    let viscous = state.u.apply_multiplier(|g, flat| -params.mu * g.wavenumber_sq(flat));
    du.axpy(1.0, &viscous)?;
    if !du.is_finite() || !dtau.is_finite() {
        return Err(Error::BlowUp { t: state.t, detail: "non-finite tendency".into() });
    }
    Ok((du, dtau))
}

fn viscous_factor(u: &SpectralField, mu: f64, dt: f64) -> SpectralField {
    u.apply_multiplier(|g, flat| (-mu * g.wavenumber_sq(flat) * dt).exp())
}

/// Largest pointwise velocity magnitude.
pub fn max_speed(u: &SpectralField) -> f64 {
    let grid = u.grid();
    let modes = grid.mode_count();
    let (ur, _) = u.to_real();
    let mut vmax = 0.0f64;
    for p in 0..modes {
        let mut s = 0.0;
        for c in 0..grid.dim() {
            let v = ur[c * modes + p];
            s += v * v;
        }
        vmax = vmax.max(s);
    }
    vmax.sqrt()
}

/// One integrating-factor RK2 (Heun) step.
///
/// The viscous semigroup is applied exactly through the factor
/// `exp(-mu |xi|^2 dt)`; the transformed variable advances with explicit
/// two-stage RK. The stress has no stiff term and advances fully explicitly.
/// The result is re-projected and its conjugate symmetry re-enforced so the
/// state invariants cannot drift.
pub fn step(
    state: &State,
    dt: f64,
    params: &ConstitutiveParams,
    terms: TermSwitches,
    cfl_safety: f64,
) -> Result<State> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::ParamOutOfRange(format!("dt = {dt} must be positive")));
    }
    let vmax = max_speed(&state.u);
    if !vmax.is_finite() || !state.tau.is_finite() {
        return Err(Error::BlowUp { t: state.t, detail: "non-finite state".into() });
    }
    if vmax > 0.0 {
        let limit = cfl_safety * state.u.grid().spacing() / vmax;
        if dt > limit {
            return Err(Error::CflViolation { dt, limit, t: state.t });
        }
    }

    let (k1u, k1tau) = explicit_rhs(&state.u, &state.tau, params, terms)?;
    if !k1u.is_finite() || !k1tau.is_finite() {
        return Err(Error::BlowUp { t: state.t, detail: "non-finite first stage".into() });
    }

    // predictor, with the viscous factor over the whole step
    let mut u_star = state.u.clone();
    u_star.axpy(dt, &k1u)?;
    let mut u_star = viscous_factor(&u_star, params.mu, dt);
    let mut tau_star = state.tau.clone();
    tau_star.axpy(dt, &k1tau)?;
    u_star.enforce_conj_symmetry();

    let (k2u, k2tau) = explicit_rhs(&u_star, &tau_star, params, terms)?;
    if !k2u.is_finite() || !k2tau.is_finite() {
        return Err(Error::BlowUp { t: state.t, detail: "non-finite second stage".into() });
    }

    // corrector: u_next = E (u + dt/2 k1) + dt/2 k2, tau plain Heun
    let mut u_half = state.u.clone();
    u_half.axpy(0.5 * dt, &k1u)?;
    let mut u_next = viscous_factor(&u_half, params.mu, dt);
    u_next.axpy(0.5 * dt, &k2u)?;

    let mut tau_next = state.tau.clone();
    tau_next.axpy(0.5 * dt, &k1tau)?;
    tau_next.axpy(0.5 * dt, &k2tau)?;

    let mut u_next = leray_project(&u_next)?;
    u_next.enforce_conj_symmetry();
    tau_next.enforce_conj_symmetry();

    if !u_next.is_finite() || !tau_next.is_finite() {
        return Err(Error::BlowUp { t: state.t + dt, detail: "non-finite state".into() });
    }
    State::new(state.t + dt, u_next, tau_next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modes::propagator;
    use crate::random;
    use crate::solver::state::{effective_variables, State};
    use crate::spectral::ops::{convect, dealias, derivative, multiply};
    use crate::spectral::Grid;
    use num_complex::Complex64;

    fn grid() -> Grid {
        Grid::new(2, 32).unwrap()
    }

    fn small_state(g: &Grid, seed: u64) -> State {
        let mut u = random::divfree_field(g, 1, 6, seed);
        u.scale(1e-2);
        let mut tau = random::symtensor_field(g, 1, 6, seed + 7);
        tau.scale(1e-2);
        State::new(0.0, u, tau).unwrap()
    }

    const ALL: TermSwitches = TermSwitches { nonlinear: true, coupling: true };

    #[test]
    fn zero_state_has_zero_tendency() {
        let g = grid();
        let state = State::new(
            0.0,
            SpectralField::zeros(&g, Rank::Vector),
            SpectralField::zeros(&g, Rank::SymTensor),
        )
        .unwrap();
        let (du, dtau) = nonlinear_rhs(&state, &ConstitutiveParams::default(), true).unwrap();
        assert_eq!(du.spectral_max(), 0.0);
        assert_eq!(dtau.spectral_max(), 0.0);
    }

    #[test]
    fn stationary_velocity_feels_only_the_stress() {
        let g = grid();
        let tau = random::symtensor_field(&g, 1, 6, 3);
        let state = State::new(0.0, SpectralField::zeros(&g, Rank::Vector), tau.clone()).unwrap();
        let (du, dtau) = nonlinear_rhs(&state, &ConstitutiveParams::default(), true).unwrap();
        let expect = leray_project(&divergence_tensor(&tau).unwrap()).unwrap();
        let scale = expect.spectral_max();
        assert!(du.sub(&expect).unwrap().spectral_max() <= 1e-12 * scale);
        assert!(dtau.spectral_max() <= 1e-14);
    }

    #[test]
    fn rhs_matches_finite_difference_advection() {
        // single-mode velocity, tau = 0: dtau/dt = D(u) and the advection in
        // du/dt cross-checked against high-order finite differences on a
        // fine grid
        let n = 256usize;
        let g = Grid::new(2, n).unwrap();
        let u = SpectralField::from_fn(&g, Rank::Vector, |x, c| {
            if c == 0 { x[1].sin() } else { x[0].sin() }
        });
        let u = leray_project(&u).unwrap();
        let state = State::new(0.0, u.clone(), SpectralField::zeros(&g, Rank::SymTensor)).unwrap();
        let params = ConstitutiveParams::default();
        let (du, dtau) = nonlinear_rhs(&state, &params, true).unwrap();

        let (d, _) = sym_skew_parts(&u).unwrap();
        assert!(dtau.sub(&d).unwrap().spectral_max() <= 1e-12 * d.spectral_max());

        // finite-difference (u.grad)u, 6th order centered
        let modes = g.mode_count();
        let (ur, _) = u.to_real();
        let h = g.spacing();
        let stencil = [(1i64, 3.0 / 4.0), (2, -3.0 / 20.0), (3, 1.0 / 60.0)];
        let mut adv = vec![0.0; 2 * modes];
        let at = |c: usize, i: i64, j: i64| {
            let ii = i.rem_euclid(n as i64) as usize;
            let jj = j.rem_euclid(n as i64) as usize;
            ur[c * modes + ii * n + jj]
        };
        for i in 0..n as i64 {
            for j in 0..n as i64 {
                let p = (i as usize) * n + j as usize;
                for c in 0..2 {
                    let mut dx = 0.0;
                    let mut dy = 0.0;
                    for (off, w) in stencil {
                        dx += w * (at(c, i + off, j) - at(c, i - off, j));
                        dy += w * (at(c, i, j + off) - at(c, i, j - off));
                    }
                    adv[c * modes + p] =
                        at(0, i, j) * dx / h + at(1, i, j) * dy / h;
                }
            }
        }
        let mut adv_field = SpectralField::from_real(&g, Rank::Vector, &adv).unwrap();
        dealias(&mut adv_field);
        let mut expect_du = leray_project(&adv_field).unwrap();
        expect_du.scale(-1.0);
        expect_du.axpy(1.0, &u.apply_multiplier(|g, flat| -g.wavenumber_sq(flat))).unwrap();
        expect_du.axpy(1.0, &leray_project(&divergence_tensor(&state.tau).unwrap()).unwrap())
            .unwrap();
        let err = du.sub(&expect_du).unwrap().spectral_max();
        assert!(err <= 1e-6 * u.spectral_max(), "fd mismatch {err:.3e}");
    }

    #[test]
    fn pure_heat_decay_is_exact() {
        // k2 = 0 keeps tau at zero; with the nonlinearity off the velocity
        // is pure heat flow and the integrating factor is exact per step
        let g = grid();
        let mut u = SpectralField::zeros(&g, Rank::Vector);
        u.set_mode_pair(0, &[0, 1], Complex64::new(0.0, -0.35));
        let state0 =
            State::new(0.0, u.clone(), SpectralField::zeros(&g, Rank::SymTensor)).unwrap();
        let params = ConstitutiveParams { k2: 0.0, ..Default::default() };
        let terms = TermSwitches { nonlinear: false, coupling: true };
        let dt = 0.05;
        let mut state = state0;
        for _ in 0..40 {
            state = step(&state, dt, &params, terms, 0.5).unwrap();
        }
        assert!(state.tau.spectral_max() < 1e-15);
        let t = state.t;
        let flat = g.mode_index(&[0, 1]);
        let got = state.u.coeff(0, flat);
        let expect = Complex64::new(0.0, -0.35) * (-t).exp();
        assert!((got - expect).norm() <= 1e-13 * expect.norm(), "heat factor must be exact");
    }

    #[test]
    fn linear_step_tracks_the_mode_propagator() {
        // with advection off and the exchange doubled (k2 = 2) the pair
        // (gamma, u) obeys the 2x2 symbol exactly; one RK2 step matches the
        // exact propagator to third order
        let g = grid();
        let mut u = SpectralField::zeros(&g, Rank::Vector);
        u.set_mode_pair(1, &[1, 0], Complex64::new(0.2, 0.1));
        let mut tau = SpectralField::zeros(&g, Rank::SymTensor);
        tau.set_mode_pair(1, &[1, 0], Complex64::new(-0.15, 0.05));
        let state = State::new(0.0, u, tau).unwrap();
        let params = ConstitutiveParams { k2: 2.0, ..Default::default() };
        let terms = TermSwitches { nonlinear: false, coupling: true };

        let flat = g.mode_index(&[1, 0]);
        let track = |s: &State| -> [Complex64; 2] {
            let eff = effective_variables(s).unwrap();
            [eff.gamma.coeff(1, flat), s.u.coeff(1, flat)]
        };
        let y0 = track(&state);

        for dt in [2e-3, 1e-3, 5e-4] {
            let next = step(&state, dt, &params, terms, 0.5).unwrap();
            let y1 = track(&next);
            let e = propagator(1.0, dt).unwrap();
            let expect = [
                e[0][0] * y0[0] + e[0][1] * y0[1],
                e[1][0] * y0[0] + e[1][1] * y0[1],
            ];
            let err = (y1[0] - expect[0]).norm().max((y1[1] - expect[1]).norm());
            assert!(err <= 2.0 * dt.powi(3), "dt = {dt}: one-step error {err:.3e}");
        }
    }

    #[test]
    fn step_halving_shows_second_order() {
        let g = grid();
        let state0 = small_state(&g, 11);
        let params = ConstitutiveParams { b: 0.4, ..Default::default() };
        let run = |dt: f64, t_end: f64| {
            let mut s = state0.clone();
            let steps = (t_end / dt).round() as usize;
            for _ in 0..steps {
                s = step(&s, dt, &params, ALL, 0.5).unwrap();
            }
            s
        };
        let t_end = 0.2;
        let reference = run(t_end / 512.0, t_end);
        let coarse = run(t_end / 16.0, t_end);
        let fine = run(t_end / 32.0, t_end);
        let err_c = coarse.u.sub(&reference.u).unwrap().spectral_max();
        let err_f = fine.u.sub(&reference.u).unwrap().spectral_max();
        let order = (err_c / err_f).log2();
        assert!(order >= 1.8, "observed order {order:.2}");
    }

    #[test]
    fn cfl_violation_is_detected() {
        let g = grid();
        let u = SpectralField::from_fn(&g, Rank::Vector, |x, c| {
            if c == 0 { 10.0 * x[1].sin() } else { 0.0 }
        });
        let u = leray_project(&u).unwrap();
        let state = State::new(0.0, u, SpectralField::zeros(&g, Rank::SymTensor)).unwrap();
        let err = step(&state, 0.5, &ConstitutiveParams::default(), ALL, 0.5).unwrap_err();
        assert!(matches!(err, Error::CflViolation { .. }));
    }

    #[test]
    fn advection_identities_used_by_the_stepper() {
        // conservative advection of tau agrees with the convective form
        let g = grid();
        let state = small_state(&g, 21);
        let a = advect_conservative(&state.u, &state.tau).unwrap();
        let b = convect(&state.u, &state.tau).unwrap();
        assert!(a.sub(&b).unwrap().spectral_max() <= 1e-13);
        // product rule survives discretization inside the dealiased band:
        // d/dx1 (f^2) = 2 f d/dx1 f
        let f = random::scalar_field(&g, 1, 6, 23);
        let lhs = derivative(&multiply(&f, &f).unwrap(), 0).unwrap();
        let df = derivative(&f, 0).unwrap();
        let mut rhs = multiply(&f, &df).unwrap();
        rhs.scale(2.0);
        let worst = lhs.sub(&rhs).unwrap().spectral_max();
        assert!(worst <= 1e-11 * f.spectral_max().max(1.0));
    }
}
