use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("numerical breakdown: {0}")]
    NumericalBreakdown(String),
    #[error("inconsistent system (residual {0:.3e})")]
    Inconsistent(f64),
    #[error("non-finite input")]
    NonFinite,
}
