//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PtError {
    #[error("unknown model `{0}`; available: {1}")]
    UnknownModel(String, String),
    #[error("unknown irrep `{0}` for group {1}")]
    UnknownIrrep(String, String),
    #[error("row {row} out of range for irrep {irrep} of dimension {dim}")]
    RowOutOfRange { irrep: String, row: usize, dim: usize },
    #[error("duplicate basis state at positions {0} and {1}")]
    DuplicateBasisState(usize, usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("eigensolver failed to converge on a {size}x{size} block")]
    EigenNoConvergence { size: usize },
    #[error("eigensolver residual {residual:.3e} exceeds contract {contract:.3e} on a {size}x{size} block")]
    ResidualTooLarge { size: usize, residual: f64, contract: f64 },
    #[error("basis dimension {dim} exceeds the exact-computation cap {cap}")]
    CapExceeded { dim: usize, cap: usize },
    #[error("order {order} needs virtual states beyond shell {max_shell}; minimal sufficient shell is {min_shell}")]
    OrderNeedsShell { order: usize, max_shell: u32, min_shell: u32 },
    #[error("perturbation series unsupported for `{model}`: {reason}")]
    SeriesUnsupported { model: String, reason: String },
    #[error("bracket [{lo}, {hi}] does not straddle a real-to-complex transition: {detail}")]
    BracketInvalid { lo: f64, hi: f64, detail: String },
    #[error("matrix entry outside the exact ring at ({row},{col}); use the unnormalized assembly")]
    EntryOutOfRing { row: usize, col: usize },
    #[error("shell cap {cap} reached before convergence (last max delta {delta:.3e})")]
    ShellCapReached { cap: u32, delta: f64 },
    #[error("row-resolved projection needs a representation realization for irrep {0}")]
    NoRealization(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = PtError> = std::result::Result<T, E>;
