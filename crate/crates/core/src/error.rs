use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The matrix lies outside the set where the requested factorization exists.
    #[error("outside decomposable set: |{entry}| = {magnitude:e} below threshold")]
    OutsideDecomposableSet { entry: &'static str, magnitude: f64 },

    #[error("outside phase space: {0}")]
    OutsidePhaseSpace(String),

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("division by zero: {0}")]
    DivisionByZero(String),

    #[error("too few samples: got {got}, need at least {need}")]
    TooFewSamples { got: usize, need: usize },

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("maximum number of steps ({0}) exceeded")]
    MaxStepsExceeded(usize),
}
