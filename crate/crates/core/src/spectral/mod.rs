//! Periodic-domain spectral calculus.
//!
//! Everything here operates on [`SpectralField`]s over a [`Grid`]; fields are
//! immutable values, operations are pure functions, and every quadratic
//! product is evaluated pointwise in physical space and then dealiased with
//! the two-thirds rule.

mod constitutive;
mod field;
mod grid;
pub mod ops;
pub mod snapshot;

pub use constitutive::{bilinear_f, bilinear_f_parts, ConstitutiveParams};
pub use field::{sym_index, Rank, SpectralField};
pub use grid::Grid;
