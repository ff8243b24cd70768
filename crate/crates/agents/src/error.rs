use ib_certificates::CertError;
use ib_model::ModelError;
use ib_numkit::NumError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AgentError {
    #[error("agent used before reset")]
    NotReset,
    #[error("select and observe must alternate: {0}")]
    Protocol(String),
    #[error("outcome lies outside the body (arm {arm})")]
    OutcomeOutsideBody { arm: usize },
    #[error("confidence set is empty")]
    EmptyConfidenceSet,
    #[error("design matrix is not positive definite")]
    SingularX,
    #[error("scenario not supported by this agent: {0}")]
    Unsupported(String),
    #[error("invalid agent parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Cert(#[from] CertError),
    #[error(transparent)]
    Numeric(#[from] NumError),
}

pub type Result<T> = std::result::Result<T, AgentError>;
