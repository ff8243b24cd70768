//! Running agents against nature policies: single episodes, regret curves,
//! Monte-Carlo summaries with CSV output, and the outcome-concentration
//! experiment.

mod concentration;
mod episode;
mod error;
mod montecarlo;
mod specs;

pub use concentration::{concentration_experiment, flat_distance, ConcentrationResult};
pub use episode::{derive_seed, regret_trace, run_episode, RegretRecord, Trace};
pub use error::{Result, SimError};
pub use montecarlo::{monte_carlo, write_outputs, McOutput, Summary};
pub use specs::{AgentFactory, AgentKind, AgentSpec, NatureKind, NatureSpec};
