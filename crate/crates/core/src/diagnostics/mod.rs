//! Numerical verification of the structural identities and estimates:
//! exact cancellations, per-block energy budgets, the hybrid norm
//! functional, scaling fits for oscillating data, and running empirical
//! constants for the estimate chain.

mod chain;
mod energy;
mod residuals;
mod scaling;
mod xfun;

pub use chain::{estimate_chain_monitor, ChainEntry, ChainReport};
pub use energy::{block_energy_balance, EnergyLedger, LedgerRow};
pub use residuals::{
    cancellation_residual, cancellation_residual_raw, transport_residual, transport_residual_raw,
    TransportTarget,
};
pub use scaling::{oscillating_data_norm, scaling_fit, ScalingFit};
pub use xfun::{hybrid_functional, XSample, X_COMPONENT_NAMES};
