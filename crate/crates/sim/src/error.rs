use ib_agents::AgentError;
use ib_nature::NatureError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid simulation parameter: {0}")]
    InvalidParameter(String),
    #[error("agent: {0}")]
    Agent(#[from] AgentError),
    #[error("nature: {0}")]
    Nature(#[from] NatureError),
    #[error(transparent)]
    Model(#[from] ib_model::ModelError),
    #[error(transparent)]
    Geometry(#[from] ib_geometry::GeomError),
    #[error(transparent)]
    Cert(#[from] ib_certificates::CertError),
    #[error("params: {0}")]
    Params(#[from] serde_json::Error),
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, SimError>;
