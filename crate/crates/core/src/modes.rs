//! Exact per-mode analysis of the linearized system.
//!
//! With `gamma = lambda^-1 P div(tau)` (the dissipative stress component) and
//! the coupling normalized so the stress source feeds the full Laplacian, each
//! Fourier mode of the pair `(gamma, u)` obeys `d/dt y = A(r) y` with
//! `r = |xi|` and
//!
//! ```text
//! A(r) = [ 0   -r  ]
//!        [ r   -r^2]
//! ```
//!
//! Trace `-r^2`, determinant `r^2`, characteristic equation
//! `l^2 + r^2 l + r^2 = 0`. Below `r = 2` the roots are a complex pair with
//! real part `-r^2/2` (heat decay at half diffusivity); above it they are
//! real and split into a parabolic branch `~ -r^2` and a damped branch
//! `~ -1`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Eigenvalue regime of the symbol at a given radius.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// `r < 2`: complex-conjugate pair, oscillatory decay.
    Oscillatory,
    /// `r = 2`: double root `-2`, Jordan block.
    Degenerate,
    /// `r > 2`: two real roots, parabolic + damped.
    Overdamped,
}

impl Regime {
    pub fn classify(r: f64) -> Regime {
        if r < 2.0 {
            Regime::Oscillatory
        } else if r > 2.0 {
            Regime::Overdamped
        } else {
            Regime::Degenerate
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Oscillatory => "oscillatory",
            Regime::Degenerate => "degenerate",
            Regime::Overdamped => "overdamped",
        }
    }
}

fn check_radius(r: f64) -> Result<()> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::ParamOutOfRange(format!("mode radius r = {r} must be positive")));
    }
    Ok(())
}

/// The 2x2 symbol matrix `[[0, -r], [r, -r^2]]`.
pub fn mode_matrix(r: f64) -> Result<[[f64; 2]; 2]> {
    check_radius(r)?;
    Ok([[0.0, -r], [r, -r * r]])
}

/// Both eigenvalue branches and the regime tag.
///
/// `lambda_plus` carries the `+` sign of the discriminant square root: the
/// positive-frequency branch below `r = 2` and the parabolic (most negative)
/// branch above it.
pub fn eigenvalues(r: f64) -> Result<(Complex64, Complex64, Regime)> {
    check_radius(r)?;
    let r2 = r * r;
    let regime = Regime::classify(r);
    let (plus, minus) = match regime {
        Regime::Oscillatory => {
            let omega = 0.5 * r2 * ((4.0 - r2) / r2).sqrt();
            (Complex64::new(-0.5 * r2, omega), Complex64::new(-0.5 * r2, -omega))
        }
        Regime::Degenerate => (Complex64::new(-2.0, 0.0), Complex64::new(-2.0, 0.0)),
        Regime::Overdamped => {
            let root = 0.5 * r2 * ((r2 - 4.0) / r2).sqrt();
            (Complex64::new(-0.5 * r2 - root, 0.0), Complex64::new(-0.5 * r2 + root, 0.0))
        }
    };
    Ok((plus, minus, regime))
}

/// A fully resolved mode: symbol, spectrum, regime.
#[derive(Clone, Debug)]
pub struct LinearMode {
    pub r: f64,
    pub matrix: [[f64; 2]; 2],
    pub lambda_plus: Complex64,
    pub lambda_minus: Complex64,
    pub regime: Regime,
}

impl LinearMode {
    pub fn new(r: f64) -> Result<Self> {
        let matrix = mode_matrix(r)?;
        let (lambda_plus, lambda_minus, regime) = eigenvalues(r)?;
        Ok(LinearMode { r, matrix, lambda_plus, lambda_minus, regime })
    }

    /// Largest violation of the characteristic identity
    /// `l^2 + r^2 l + r^2 = 0` across both branches, relative to `r^2`.
    pub fn characteristic_residual(&self) -> f64 {
        let r2 = self.r * self.r;
        let res = |l: Complex64| (l * l + r2 * l + r2).norm();
        res(self.lambda_plus).max(res(self.lambda_minus)) / r2.max(1.0)
    }
}

/// `exp(t A(r))`, exact.
///
/// Uses the scalar splitting `A = -r^2/2 I + M` with `M^2 = Omega^2 I`,
/// `Omega^2 = r^4/4 - r^2`, which gives
/// `exp(tA) = (e^{l+ t} + e^{l- t})/2 I + (e^{l+ t} - e^{l- t})/(2 Omega) M`
/// with `l+-` the two eigenvalue branches. Both exponents have nonpositive
/// real part, so the evaluation never overflows. Near the degenerate radius
/// (`Omega t` small) the difference quotient switches to its series, which
/// reduces to the Jordan form `e^{-2t}(I + t(A + 2I))` at `r = 2` exactly.
pub fn propagator(r: f64, t: f64) -> Result<[[f64; 2]; 2]> {
    check_radius(r)?;
    if t < 0.0 || !t.is_finite() {
        return Err(Error::ParamOutOfRange(format!("time t = {t} must be nonnegative")));
    }
    let r2 = r * r;
    let m = [[0.5 * r2, -r], [r, -0.5 * r2]];
    let omega = Complex64::new(0.25 * r2 * r2 - r2, 0.0).sqrt();
    let x = omega * t;
    let (cosh_term, sinhc_t) = if x.norm() < 1e-4 {
        // series around the Jordan point, with the decay factored back in
        let decay = (-0.5 * r2 * t).exp();
        let x2 = x * x;
        (
            decay * (1.0 + x2 / 2.0 + x2 * x2 / 24.0),
            decay * t * (1.0 + x2 / 6.0 + x2 * x2 / 120.0),
        )
    } else {
        let ep = (Complex64::new(-0.5 * r2, 0.0) + omega).scale(t).exp();
        let em = (Complex64::new(-0.5 * r2, 0.0) - omega).scale(t).exp();
        ((ep + em) / 2.0, (ep - em) / (2.0 * omega))
    };
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let id = if i == j { 1.0 } else { 0.0 };
            let entry = cosh_term * id + sinhc_t * m[i][j];
            out[i][j] = entry.re;
        }
    }
    Ok(out)
}

/// One Duhamel update `y(t + dt) = e^{dt A} y + integral of e^{(dt-s)A} f`,
/// with the forcing integral approximated by the trapezoid rule. The forcing
/// is an opaque callback returning the pair `(gamma, u)`-space components.
pub fn duhamel_step(
    r: f64,
    t: f64,
    dt: f64,
    y: [f64; 2],
    forcing: impl Fn(f64) -> [f64; 2],
) -> Result<[f64; 2]> {
    let e = propagator(r, dt)?;
    let f0 = forcing(t);
    let f1 = forcing(t + dt);
    let apply = |m: &[[f64; 2]; 2], v: [f64; 2]| {
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    };
    let ef0 = apply(&e, f0);
    let ey = apply(&e, y);
    Ok([
        ey[0] + 0.5 * dt * (ef0[0] + f1[0]),
        ey[1] + 0.5 * dt * (ef0[1] + f1[1]),
    ])
}

/// Condition number of the normalized eigenvector basis; the constant in the
/// oscillatory-regime decay envelope `|exp(tA)| <= kappa e^{-r^2 t / 2}`.
/// Unbounded as `r -> 2`.
pub fn eigenbasis_condition(r: f64) -> Result<f64> {
    check_radius(r)?;
    if (r - 2.0).abs() < 1e-12 {
        return Err(Error::DegenerateInput(
            "eigenvector basis is singular at the degenerate radius".into(),
        ));
    }
    let (lp, lm, _) = eigenvalues(r)?;
    // eigenvector for l: (r, -l), normalized
    let col = |l: Complex64| {
        let n = (r * r + l.norm_sqr()).sqrt();
        [Complex64::new(r / n, 0.0), -l / n]
    };
    let v = [col(lp), col(lm)];
    // singular values of the 2x2 complex matrix [v0 v1]
    let a = v[0][0];
    let b = v[1][0];
    let c = v[0][1];
    let d = v[1][1];
    let g11 = (a.conj() * a + c.conj() * c).re;
    let g12 = a.conj() * b + c.conj() * d;
    let g22 = (b.conj() * b + d.conj() * d).re;
    let tr = g11 + g22;
    let det = (g11 * g22 - g12.norm_sqr()).max(0.0);
    let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
    let s_max = (0.5 * (tr + disc)).sqrt();
    let s_min = (0.5 * (tr - disc)).max(0.0).sqrt();
    if s_min == 0.0 {
        return Err(Error::DegenerateInput("singular eigenvector basis".into()));
    }
    Ok(s_max / s_min)
}

/// One row of the high-frequency asymptotics table.
#[derive(Clone, Copy, Debug)]
pub struct AsymptoticRow {
    pub r: f64,
    /// `lambda_plus / (-r^2)`, tending to 1.
    pub parabolic_ratio: f64,
    /// The damped branch itself, tending to -1.
    pub lambda_minus: f64,
}

/// Tabulate the parabolic/damped asymptotics over radii strictly above the
/// degenerate point.
pub fn asymptotic_check(radii: &[f64]) -> Result<Vec<AsymptoticRow>> {
    let mut rows = Vec::with_capacity(radii.len());
    for &r in radii {
        if r <= 2.0 {
            return Err(Error::ParamOutOfRange(format!(
                "asymptotic table needs r > 2, got {r}"
            )));
        }
        let (lp, lm, _) = eigenvalues(r)?;
        rows.push(AsymptoticRow {
            r,
            parabolic_ratio: lp.re / (-r * r),
            lambda_minus: lm.re,
        });
    }
    Ok(rows)
}

/// The per-block energy weight form.
///
/// In the per-mode amplitudes `(a, v)` of `(gamma, u)`, with
/// `w`-amplitude `= r a - v`, the weighted energy
/// `Q(a, v) = |a|^2 + (1 - eta)|v|^2 + eta |r a - v|^2`
/// is the quadratic form with matrix
/// `[[1 + eta r^2, -eta r], [-eta r, 1]]`.
#[derive(Clone, Copy, Debug)]
pub struct CoercivityForm {
    pub matrix: [[f64; 2]; 2],
}

impl CoercivityForm {
    pub fn eval(&self, a: f64, v: f64) -> f64 {
        let m = &self.matrix;
        m[0][0] * a * a + 2.0 * m[0][1] * a * v + m[1][1] * v * v
    }

    /// Smallest eigenvalue of the symmetric 2x2 form.
    pub fn min_eigenvalue(&self) -> f64 {
        let m = &self.matrix;
        let tr = m[0][0] + m[1][1];
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        0.5 * (tr - (tr * tr - 4.0 * det).max(0.0).sqrt())
    }
}

/// Default weight for a given split index: small enough that the `w` term
/// never overwhelms the plain energy on the low range, which pins the
/// equivalence constant at 4 or better.
pub fn default_eta(j0: i32) -> f64 {
    0.5f64.min((-2.0 * j0 as f64 - 4.0).exp2())
}

/// Build the weighted energy form at radius `r` and weight `eta`, returning
/// the form and the ratio of its smallest eigenvalue to the reference form
/// `|a|^2 + |v|^2` (identity, eigenvalue 1).
pub fn coercivity_weight(r: f64, eta: f64) -> Result<(CoercivityForm, f64)> {
    check_radius(r)?;
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::ParamOutOfRange(format!("eta = {eta} outside (0, 1)")));
    }
    let form = CoercivityForm {
        matrix: [[1.0 + eta * r * r, -eta * r], [-eta * r, 1.0]],
    };
    let ratio = form.min_eigenvalue();
    Ok((form, ratio))
}

/// Ratio of the per-mode dissipation form
/// `(1 - eta) |v|^2 + eta r^2 |a|^2` to `r^2` times the weighted energy: the
/// figure that must stay positive for parabolic decay of the whole energy.
/// It degenerates like `1/r^2` at high radius, which is exactly why the
/// weighted-energy argument is confined to the low-frequency range.
pub fn dissipation_energy_ratio(r: f64, eta: f64) -> Result<f64> {
    let (energy, _) = coercivity_weight(r, eta)?;
    let r2 = r * r;
    let diss = [[eta * r2, 0.0], [0.0, 1.0 - eta]];
    // generalized eigenvalue problem diss x = mu (r^2 energy) x; smallest mu
    // by scanning the unit circle (2x2, a dense sweep is exact enough)
    let mut min_ratio = f64::INFINITY;
    let samples = 4096;
    for k in 0..samples {
        let th = std::f64::consts::PI * k as f64 / samples as f64;
        let (a, v) = (th.cos(), th.sin());
        let d = diss[0][0] * a * a + diss[1][1] * v * v;
        let e = r2 * energy.eval(a, v);
        if e > 0.0 {
            min_ratio = min_ratio.min(d / e);
        }
    }
    Ok(min_ratio)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: roots of `l^2 + r^2 l + r^2` by the quadratic
    /// formula in complex arithmetic.
    fn quadratic_roots(r: f64) -> (Complex64, Complex64) {
        let r2 = Complex64::new(r * r, 0.0);
        let disc = (r2 * r2 - 4.0 * r2).sqrt();
        ((-r2 - disc) / 2.0, (-r2 + disc) / 2.0)
    }

    #[test]
    fn matrix_entries_and_invariants() {
        assert_eq!(mode_matrix(1.0).unwrap(), [[0.0, -1.0], [1.0, -1.0]]);
        assert_eq!(mode_matrix(2.0).unwrap(), [[0.0, -2.0], [2.0, -4.0]]);
        let m = mode_matrix(3.0).unwrap();
        let trace = m[0][0] + m[1][1];
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        assert_eq!(trace, -9.0);
        assert_eq!(det, 9.0);
        assert!(mode_matrix(0.0).is_err());
        assert!(mode_matrix(-1.0).is_err());
    }

    #[test]
    fn oscillatory_regime_is_a_conjugate_pair() {
        let (lp, lm, regime) = eigenvalues(1.0).unwrap();
        assert_eq!(regime, Regime::Oscillatory);
        let expect = Complex64::new(-0.5, 0.5 * 3.0f64.sqrt());
        assert!((lp - expect).norm() < 1e-14);
        assert!((lm - expect.conj()).norm() < 1e-14);
    }

    #[test]
    fn degenerate_double_root() {
        let (lp, lm, regime) = eigenvalues(2.0).unwrap();
        assert_eq!(regime, Regime::Degenerate);
        assert!((lp - Complex64::new(-2.0, 0.0)).norm() < 1e-10);
        assert!((lm - Complex64::new(-2.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn overdamped_matches_quadratic_oracle() {
        let (lp, lm, regime) = eigenvalues(10.0).unwrap();
        assert_eq!(regime, Regime::Overdamped);
        let (op, om) = quadratic_roots(10.0);
        assert!((lp - op).norm() < 1e-10);
        assert!((lm - om).norm() < 1e-10);
        assert!((lp.re + 98.9898).abs() < 1e-3);
        assert!((lm.re + 1.0102).abs() < 1e-3);
    }

    #[test]
    fn characteristic_identity_over_sweep() {
        let mut r = 0.01;
        while r <= 1000.0 {
            let mode = LinearMode::new(r).unwrap();
            assert!(mode.characteristic_residual() <= 1e-10, "r = {r}");
            r *= 1.17;
        }
    }

    #[test]
    fn regime_boundary_continuity() {
        // the branches meet like sqrt(|r - 2|): at distance d the deviation
        // from the double root is 2 sqrt(d) to leading order
        for d in [1e-6f64, 1e-8, 1e-10] {
            let bound = 2.0 * d.sqrt() * 1.05;
            for r in [2.0 - d, 2.0 + d] {
                let (lp, lm, _) = eigenvalues(r).unwrap();
                assert!((lp - Complex64::new(-2.0, 0.0)).norm() < bound, "d = {d}");
                assert!((lm - Complex64::new(-2.0, 0.0)).norm() < bound, "d = {d}");
            }
        }
    }

    #[test]
    fn propagator_at_zero_is_identity() {
        let e = propagator(3.7, 0.0).unwrap();
        assert_eq!(e, [[1.0, 0.0], [0.0, 1.0]]);
        assert!(propagator(1.0, -0.1).is_err());
    }

    #[test]
    fn propagator_semigroup_and_generator() {
        for r in [0.5, 1.0, 1.9, 2.0, 2.1, 5.0] {
            let (s, t) = (0.3, 0.45);
            let est = propagator(r, s + t).unwrap();
            let es = propagator(r, s).unwrap();
            let et = propagator(r, t).unwrap();
            for i in 0..2 {
                for j in 0..2 {
                    let prod = es[i][0] * et[0][j] + es[i][1] * et[1][j];
                    assert!((est[i][j] - prod).abs() <= 1e-10, "r = {r}");
                }
            }
            // d/dt exp(tA) at 0 equals A (finite difference; h small enough
            // that the O(h |A|^2) truncation sits below the tolerance)
            let h = 1e-9;
            let eh = propagator(r, h).unwrap();
            let a = mode_matrix(r).unwrap();
            for i in 0..2 {
                for j in 0..2 {
                    let id = if i == j { 1.0 } else { 0.0 };
                    let fd = (eh[i][j] - id) / h;
                    assert!((fd - a[i][j]).abs() <= 1e-6 * (1.0 + a[i][j].abs()), "r = {r}");
                }
            }
        }
    }

    #[test]
    fn jordan_block_at_degenerate_radius() {
        let t = 0.8;
        let e = propagator(2.0, t).unwrap();
        let a = mode_matrix(2.0).unwrap();
        let decay = (-2.0 * t).exp();
        for i in 0..2 {
            for j in 0..2 {
                let id = if i == j { 1.0 } else { 0.0 };
                let jordan = decay * (id + t * (a[i][j] + 2.0 * id));
                assert!((e[i][j] - jordan).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn high_radius_entries_follow_the_damped_branch() {
        let (_, lm, _) = eigenvalues(10.0).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let entry = propagator(10.0, 5.0).unwrap()[i][j];
                assert!(entry.abs() <= 10.0 * (lm.re * 5.0).exp(), "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn oscillatory_decay_envelope() {
        for r in [0.5, 1.0, 1.5, 1.9] {
            let kappa = eigenbasis_condition(r).unwrap();
            let mut t = 0.0;
            while t <= 5.0 {
                let e = propagator(r, t).unwrap();
                let bound = kappa * (-0.5 * r * r * t).exp();
                for row in &e {
                    for &v in row {
                        assert!(v.abs() <= bound * (1.0 + 1e-9), "r = {r}, t = {t}");
                    }
                }
                t += 0.25;
            }
        }
        assert!(eigenbasis_condition(2.0).is_err());
    }

    #[test]
    fn asymptotics_approach_parabolic_and_damped_limits() {
        let radii = [4.0, 8.0, 16.0, 32.0, 64.0, 100.0];
        let rows = asymptotic_check(&radii).unwrap();
        for w in rows.windows(2) {
            assert!(w[1].parabolic_ratio > w[0].parabolic_ratio);
            assert!(w[1].lambda_minus > w[0].lambda_minus); // climbing toward -1
        }
        for row in &rows {
            assert!((row.lambda_minus + 1.0).abs() <= 2.0 / (row.r * row.r), "r = {}", row.r);
        }
        // the parabolic ratio expands as 1 - 1/r^2 - O(r^-4)
        let r100 = rows.last().unwrap();
        assert!((r100.parabolic_ratio - (1.0 - 1e-4)).abs() < 1e-7);
        assert!(r100.parabolic_ratio <= 1.0);
        // the hand-checked row at r = 4: -8 (1 - sqrt(3)/2)
        let l4 = rows[0].lambda_minus;
        assert!((l4 - (-8.0 * (1.0 - 0.75f64.sqrt()))).abs() < 1e-12);
        assert!((l4 + 1.0718).abs() < 1e-4);
        assert!(asymptotic_check(&[1.0]).is_err());
    }

    #[test]
    fn coercivity_form_matches_symbolic_expansion() {
        let (form, ratio) = coercivity_weight(1.0, 0.1).unwrap();
        assert_eq!(form.matrix, [[1.1, -0.1], [-0.1, 1.0]]);
        // oracle: minimize the Rayleigh quotient over a dense angle sweep
        let mut min_q = f64::INFINITY;
        for k in 0..20000 {
            let th = std::f64::consts::PI * k as f64 / 20000.0;
            min_q = min_q.min(form.eval(th.cos(), th.sin()));
        }
        assert!((ratio - min_q).abs() < 1e-6);
        assert!(ratio > 0.0);
    }

    #[test]
    fn small_eta_recovers_the_reference_form() {
        let (_, ratio) = coercivity_weight(3.0, 1e-9).unwrap();
        assert!((ratio - 1.0).abs() < 1e-6);
        assert!(coercivity_weight(1.0, 0.0).is_err());
        assert!(coercivity_weight(1.0, 1.0).is_err());
    }

    #[test]
    fn default_eta_keeps_low_range_uniformly_coercive() {
        for j0 in 0..=4 {
            let eta = default_eta(j0);
            let r_top = (j0 as f64).exp2() * 8.0 / 3.0;
            let mut r = 0.05;
            while r <= r_top {
                let (_, ratio) = coercivity_weight(r, eta).unwrap();
                assert!(ratio >= 0.25, "j0 = {j0}, r = {r}: ratio {ratio}");
                r *= 1.3;
            }
        }
    }

    #[test]
    fn weighted_energy_stays_equivalent_but_dissipation_degenerates() {
        // the energy equivalence never fails (min eigenvalue -> 1 - eta),
        // while parabolic-rate dissipation collapses at high radius; the
        // weighted-energy argument is therefore a low-frequency device.
        let eta = 0.25;
        let mut prev_ratio = f64::INFINITY;
        for r in [1.0, 4.0, 16.0, 64.0, 256.0] {
            let (_, equiv) = coercivity_weight(r, eta).unwrap();
            assert!(equiv >= (1.0 - eta) - 1e-9);
            assert!(equiv <= prev_ratio + 1e-12);
            prev_ratio = equiv;
        }
        let low = dissipation_energy_ratio(1.0, eta).unwrap();
        let high = dissipation_energy_ratio(100.0, eta).unwrap();
        assert!(low > 0.05);
        assert!(high < 1e-3, "dissipation/(r^2 energy) must collapse: {high}");
    }

    #[test]
    fn duhamel_reproduces_constant_forcing() {
        // y' = A y + f with constant f: analytic answer via A^{-1}
        let r = 1.5;
        let a = mode_matrix(r).unwrap();
        let f = [0.3, -0.2];
        let dt = 1e-3;
        let mut y = [0.1, 0.4];
        let mut t = 0.0;
        for _ in 0..1000 {
            y = duhamel_step(r, t, dt, y, |_| f).unwrap();
            t += dt;
        }
        // reference by fine RK4
        let mut yr = [0.1, 0.4];
        let h = 1e-5;
        let deriv = |y: [f64; 2]| {
            [a[0][0] * y[0] + a[0][1] * y[1] + f[0], a[1][0] * y[0] + a[1][1] * y[1] + f[1]]
        };
        for _ in 0..100000 {
            let k1 = deriv(yr);
            let k2 = deriv([yr[0] + 0.5 * h * k1[0], yr[1] + 0.5 * h * k1[1]]);
            let k3 = deriv([yr[0] + 0.5 * h * k2[0], yr[1] + 0.5 * h * k2[1]]);
            let k4 = deriv([yr[0] + h * k3[0], yr[1] + h * k3[1]]);
            yr[0] += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
            yr[1] += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
        }
        assert!((y[0] - yr[0]).abs() < 1e-6);
        assert!((y[1] - yr[1]).abs() < 1e-6);
    }
}
