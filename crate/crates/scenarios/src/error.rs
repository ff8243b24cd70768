use ib_model::ModelError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("invalid builder parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown scenario builder `{0}`")]
    UnknownBuilder(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("cannot read scenario file {path}: {message}")]
    Io { path: String, message: String },
    #[error("bad builder parameters: {0}")]
    Params(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, ScenarioError>;
