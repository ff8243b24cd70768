use ib_geometry::GeomError;
use ib_numkit::NumError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("index {0} outside the grid")]
    IndexOutOfGrid(usize),
    #[error("credal section of arm {arm} under hypothesis {theta} is empty")]
    InfeasibleCredalSet { arm: usize, theta: usize },
    #[error("query point lies outside the body")]
    QueryOutsideBody,
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error(transparent)]
    Geometry(#[from] GeomError),
    #[error(transparent)]
    Numeric(#[from] NumError),
}

pub type Result<T> = std::result::Result<T, ModelError>;
