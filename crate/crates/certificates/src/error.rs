use ib_geometry::GeomError;
use ib_model::ModelError;
use ib_numkit::NumError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CertError {
    #[error("F is not onto for arm {arm}, hypothesis {theta}")]
    InfeasiblePreimage { arm: usize, theta: usize },
    #[error("no sine method applies: {0}")]
    NoApplicableMethod(String),
    #[error("gap bound needs a positive gap")]
    ZeroGap,
    #[error("unsupported body: {0}")]
    UnsupportedBody(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Geometry(#[from] GeomError),
    #[error(transparent)]
    Numeric(#[from] NumError),
}

pub type Result<T> = std::result::Result<T, CertError>;
