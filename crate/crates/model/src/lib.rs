//! Outcome spaces, hypothesis families and the previsions they induce.

mod convexify;
mod error;
mod family;
mod game;
mod prevision;
mod scenario;
mod space;

pub use convexify::ConvexifiedReward;
pub use error::{ModelError, Result};
pub use family::{validate_family, Arm, CellReport, HypothesisFamily, ValidationReport};
pub use game::game_value;
pub use prevision::{lower_prevision, optimal_arm, upper_prevision, worst_outcome};
pub use scenario::{KnownValue, Meta, Scenario};
pub use space::{OutcomeSpace, RewardSpec};
