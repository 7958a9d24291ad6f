//! Error type shared across the crate.

/// Errors surfaced by oracle evaluation, grid construction, solvers and the
/// simulators.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("coordinate {value} on axis {axis} lies outside the open unit interval")]
    OutsideDomain { axis: usize, value: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("capacity exceeded: {requested} points over the cap of {cap}")]
    CapacityExceeded { requested: u128, cap: u64 },

    #[error("tabulated potential data error: {0}")]
    TabulatedData(String),

    #[error("{what} did not converge after {iterations} iterations (best estimate {best_estimate}, residual {residual:.3e})")]
    NonConvergence {
        what: &'static str,
        iterations: usize,
        best_estimate: f64,
        residual: f64,
    },

    #[error("zero quantum cost: speedup ratio is undefined")]
    ZeroQuantumCost,
}

impl Error {
    pub fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
