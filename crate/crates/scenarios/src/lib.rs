//! Scenario builders. Every builder validates its output and records grid
//! resolutions and reference values in the scenario metadata.

mod bandits;
mod continuous;
mod error;
mod lower;
mod pcb;
mod registry;
mod simplex;
mod util;

pub use bandits::{classical_gap, dhk_torus, finite_stochastic, linear_bandit};
pub use continuous::{hyperplane_r_bound, hyperplane_scenario, moment_scenario, traffic_abcde};
pub use error::{Result, ScenarioError};
pub use lower::{lower_r_scenario, lower_s_scenario, lower_s_sine_closed_form};
pub use pcb::{
    pcb_desk, pcb_scenario, zerosum_gap_lower_bound, zerosum_scenario, PcbPrefix, PcbSpec,
};
pub use registry::{build_named, builder_names, ScenarioSource};
pub use simplex::{rot_triangle, square_isometries};
pub use util::unit_grid;
