use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// An input violated a documented invariant. The message names the
    /// offending item (with indices where applicable).
    #[error("validation error: {0}")]
    Validation(String),

    #[error("solver failure: {message} (residual {residual:e})")]
    SolverFailure { message: String, residual: f64 },

    #[error("degenerate outcome: measurement operator has zero weight {weight:e}")]
    DegenerateOutcome { weight: f64 },

    #[error("ensemble has {n} states; at most {cap} are supported")]
    TooManyStates { n: usize, cap: usize },

    #[error("POVM recovery failed: {0}")]
    RecoveryFailed(String),

    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
        if expected == found {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected, found })
        }
    }
}
