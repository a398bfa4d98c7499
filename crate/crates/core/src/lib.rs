//! Pseudo-spectral solver for the incompressible Oldroyd-B system (no stress
//! damping) on the periodic torus `[0, 2*pi)^n`, `n = 2, 3`, together with the
//! frequency-space tooling used to analyse it: a dyadic (Littlewood-Paley
//! style) filter bank, Besov and time-space Besov norms, the linearized mode
//! analysis, and a diagnostic layer that checks the structural identities of
//! the system numerically.
//!
//! The governing equations, with velocity `u`, symmetric extra stress `tau`,
//! slip parameter `b` and nonnegative coefficients `mu, k1, k2`:
//!
//! ```text
//! d/dt tau + u.grad(tau) + F(tau, grad u) - k2 D(u) = 0
//! d/dt u   + u.grad(u) - mu Lap(u) + grad(Pi) - k1 div(tau) = 0
//! div u = 0
//! ```
//!
//! where `D(u)` is the symmetric part of the velocity gradient and
//! `F(tau, G) = tau W - W tau + b (D tau + tau D)` with `W` the skew part.
//! The pressure is eliminated with the Leray projector throughout.
//!
//! Crate layout:
//!
//! * [`spectral`]: grid, transforms, differential multipliers, Leray
//!   projection, fractional Laplacian powers, the constitutive algebra, and
//!   the binary snapshot format.
//! * [`dyadic`]: dyadic partition of unity, frequency blocks, Besov /
//!   time-space Besov norms, paraproduct decomposition, inequality ratio
//!   probes.
//! * [`modes`]: exact 2x2 Fourier-symbol analysis of the linearized system.
//! * [`solver`]: integrating-factor RK2 time stepping, initial data, the
//!   effective variables, trajectory recording.
//! * [`diagnostics`]: identity residuals, per-block energy bookkeeping, the
//!   hybrid norm functional, scaling fits, estimate monitors.

pub mod diagnostics;
pub mod dyadic;
pub mod error;
pub mod modes;
pub mod random;
pub mod solver;
pub mod spectral;

pub use error::{Error, Result};
pub use spectral::{ConstitutiveParams, Grid, Rank, SpectralField};
