use ib_model::ModelError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum NatureError {
    #[error("credal section of arm {arm} is empty")]
    InfeasibleCredalSet { arm: usize },
    #[error("mean for arm {arm} lies outside its credal section")]
    IncompatibleMean { arm: usize },
    #[error("invalid nature parameter: {0}")]
    InvalidParameter(String),
    #[error("nature used before reset")]
    NotReset,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Geometry(#[from] ib_geometry::GeomError),
}

pub type Result<T> = std::result::Result<T, NatureError>;
