//! Dyadic frequency analysis: smooth annular filter bank, Besov and
//! time-space Besov norms, low/high frequency splitting, paraproduct
//! decomposition, and empirical-ratio probes for the product and commutator
//! estimates the energy argument leans on.

mod besov;
mod bony;
mod inequalities;
mod partition;

pub use besov::{
    bernstein_ratio, besov_from_block_norms, besov_norm, chemin_lerner_norm, BesovSpec, Split,
    Support, TimeExponent,
};
pub use bony::bony_decompose;
pub use inequalities::{inequality_ratio, InequalityKind};
pub use partition::{chi_profile, phi_profile, DyadicPartition};
