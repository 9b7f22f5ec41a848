use thiserror::Error;

/// Errors raised by matrix, coefficient, bound and graph operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("not a constant row-sum matrix: row {row} deviates from the mean row sum by {deviation:e} (tolerance {tolerance:e})")]
    NotConstantRowSum {
        row: usize,
        deviation: f64,
        tolerance: f64,
    },

    #[error("singular matrix: pivot {pivot} has magnitude {magnitude:e}")]
    SingularMatrix { pivot: usize, magnitude: f64 },

    #[error("ergodicity coefficient of the inverse power is zero; the bound is undefined")]
    DegenerateCoefficient,

    #[error("trivial eigenvalue is {0}, expected 0")]
    TrivialEigenvalueNotZero(f64),

    #[error("dimension {n} exceeds the limit {limit} of the characteristic polynomial path")]
    DimensionTooLarge { n: usize, limit: usize },

    #[error("iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("graph is disconnected")]
    GraphDisconnected,

    #[error("graph has no edges")]
    NoEdges,

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// True for failures of a mathematical precondition (as opposed to
    /// malformed input).
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::NotConstantRowSum { .. }
                | Error::SingularMatrix { .. }
                | Error::DegenerateCoefficient
                | Error::TrivialEigenvalueNotZero(_)
                | Error::GraphDisconnected
                | Error::NoEdges
                | Error::NonConvergence { .. }
                | Error::DimensionTooLarge { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
