//! Crate-wide error type.

use thiserror::Error;

use crate::spectral::Rank;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("rank mismatch: expected {expected:?}, got {got:?}")]
    RankMismatch { expected: Rank, got: Rank },

    #[error("operands live on different grids")]
    GridMismatch,

    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),

    /// Negative powers of |xi| are only defined on mean-free data.
    #[error("nonzero mean (|c(0)| = {mean:.3e}, field scale {scale:.3e}) fed to a negative-order multiplier")]
    NonzeroMean { mean: f64, scale: f64 },

    #[error("block index {j} outside partition range [{j_min}, {j_max}]")]
    BlockOutOfRange { j: i32, j_min: i32, j_max: i32 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("time series too short ({len} samples, need at least 2)")]
    SeriesTooShort { len: usize },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("time step dt = {dt:.3e} exceeds the advective limit {limit:.3e} at t = {t:.6}")]
    CflViolation { dt: f64, limit: f64, t: f64 },

    #[error("solution lost finiteness at t = {t:.6}: {detail}")]
    BlowUp { t: f64, detail: String },

    #[error("snapshot format error: {0}")]
    SnapshotFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
