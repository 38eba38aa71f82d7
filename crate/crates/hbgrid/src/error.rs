use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("empty index set")]
    EmptySet,

    #[error("size cap exceeded: {0}")]
    CapExceeded(String),

    #[error("integer overflow while computing {0}")]
    Overflow(String),

    #[error("eigenvalue iteration did not converge after {iterations} iterations (best estimate {best_estimate})")]
    NoConvergence {
        iterations: usize,
        best_estimate: f64,
    },

    #[error("PCG did not converge after {iterations} iterations (relative residual {residual})")]
    SolverStalled { iterations: usize, residual: f64 },

    #[error("LAPACK routine {routine} failed with info = {info}")]
    Lapack { routine: &'static str, info: i32 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
