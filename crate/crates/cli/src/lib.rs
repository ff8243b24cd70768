//! Batch front end. Every command writes files and reports their paths;
//! diagnostics belong on stderr and the exit code says what went wrong
//! (see [`exit`]).

mod concentration;
pub mod config;
mod error;
pub mod output;
mod report;
mod run;

use std::path::PathBuf;

pub use concentration::cmd_concentration;
pub use config::{ConcentrationConfig, ExperimentConfig, ThetaChoice};
pub use error::{exit, CliError, Result};
pub use report::{
    cmd_bounds, cmd_params, cmd_validate, parse_sine, read_scenario, BoundsOptions, GapChoice,
};
pub use run::{cmd_run, RunOptions};

/// Files a command produced. A command can write its outputs and still
/// fail, e.g. when some episodes hit a policy error.
#[derive(Debug)]
pub struct Outcome {
    pub paths: Vec<PathBuf>,
    pub failure: Option<CliError>,
}

impl Outcome {
    pub fn ok(paths: Vec<PathBuf>) -> Self {
        Outcome {
            paths,
            failure: None,
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.failure.as_ref().map_or(exit::OK, CliError::exit_code)
    }
}
