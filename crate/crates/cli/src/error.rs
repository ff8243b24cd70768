use std::path::Path;

use ib_scenarios::ScenarioError;
use ib_sim::SimError;
use thiserror::Error;

/// Exit codes. Stable; documented in the README.
pub mod exit {
    pub const OK: i32 = 0;
    pub const IO: i32 = 1;
    pub const SCHEMA: i32 = 2;
    pub const VALIDATION: i32 = 3;
    pub const RUNTIME: i32 = 4;
    pub const NONPOSITIVE_GAP: i32 = 5;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("runtime policy error: {0}")]
    Runtime(String),
    #[error("gap bound needs a positive gap, got {0}")]
    NonPositiveGap(f64),
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => exit::IO,
            CliError::Schema(_) => exit::SCHEMA,
            CliError::Validation(_) => exit::VALIDATION,
            CliError::Runtime(_) => exit::RUNTIME,
            CliError::NonPositiveGap(_) => exit::NONPOSITIVE_GAP,
        }
    }

    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

impl From<ScenarioError> for CliError {
    fn from(e: ScenarioError) -> Self {
        match e {
            ScenarioError::Model(m) => CliError::Validation(m.to_string()),
            ScenarioError::Io { path, message } => CliError::Io {
                path,
                source: std::io::Error::new(std::io::ErrorKind::Other, message),
            },
            other => CliError::Schema(other.to_string()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Params(_) | SimError::InvalidParameter(_) => CliError::Schema(e.to_string()),
            SimError::Io { path, source } => CliError::Io { path, source },
            other => CliError::Runtime(other.to_string()),
        }
    }
}

impl From<ib_certificates::CertError> for CliError {
    fn from(e: ib_certificates::CertError) -> Self {
        CliError::Validation(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
