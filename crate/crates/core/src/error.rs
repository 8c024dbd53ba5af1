use thiserror::Error;

/// Errors raised by the channel builders, the spectral solver and the
/// Monte Carlo estimators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid system parameters: {0}")]
    InvalidParams(String),

    #[error("cluster size M = {0} is too small; at least 3 cells are required")]
    ClusterTooSmall(usize),

    #[error("channel block {index} has condition number {condition:.3e} above {limit:.1e}")]
    IllConditionedChannel {
        index: usize,
        condition: f64,
        limit: f64,
    },

    #[error("R-transform pole at z = {re}{im:+}i")]
    PoleEncountered { re: f64, im: f64 },

    #[error("no root with positive imaginary part at x = {x}")]
    NoPhysicalRoot { x: f64 },

    #[error("spectral solver did not converge at x = {x}")]
    SolverDiverged { x: f64 },

    #[error("log-determinant is not finite (Gram factorization failed)")]
    NonFiniteLogDet,

    #[error("too many degenerate draws: {redraws} redraws in trial {trial}")]
    TooManyRedraws { trial: usize, redraws: usize },

    #[error("realizations have inconsistent shapes: expected {expected:?}, got {got:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        got: (usize, usize),
    },

    #[error("empty input: {0}")]
    Empty(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
