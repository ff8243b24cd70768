use ib_numkit::NumError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("affine subspace is empty")]
    EmptySubspace,
    #[error("intersection is empty")]
    EmptyIntersection,
    #[error("unsupported body: {0}")]
    UnsupportedBody(String),
    #[error("point is not on the affine hyperplane sum(y) = 1")]
    NotOnHyperplane,
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("invalid norm: {0}")]
    InvalidNorm(String),
    #[error(transparent)]
    Numeric(#[from] NumError),
}

pub type Result<T> = std::result::Result<T, GeomError>;
