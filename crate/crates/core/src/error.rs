use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid angle triple: {0}")]
    InvalidTriple(String),

    #[error("cannot compare an interior triple with an exterior triple")]
    KindMismatch,

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("no convergence after {steps} steps (residual {residual:e})")]
    NoConvergence { steps: usize, residual: f64 },

    #[error("point is not a fixed point (residual {0:e})")]
    NotAFixedPoint(f64),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("point lies on a median line: {0}")]
    OnBoundary(String),

    #[error("invalid quadrangle: {0}")]
    InvalidQuadrangle(String),

    #[error("degenerate output: {0}")]
    DegenerateOutput(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
