//! Nature policies. Each one is reset against a scenario and a true
//! hypothesis and then answers arm pulls with outcome points of the body;
//! the law of every answer has its mean in the credal section of the pulled
//! arm.

mod audit;
mod basic;
mod error;
mod lower;

pub use audit::{compatibility_audit, ArmAudit, AuditReport};
pub use basic::{FixedMeanNature, GreedyAdversary};
pub use error::{NatureError, Result};
pub use lower::{LowerRAdversary, LowerRParams, LowerSAdversary, LowerSParams};

use ib_model::Scenario;
use serde::{Deserialize, Serialize};

/// What the policy did on its last response.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepInfo {
    pub mode: String,
    /// Mean of the response law.
    pub mean: Vec<f64>,
    /// Probability of the first support point, for two-point laws.
    pub prob: Option<f64>,
}

pub trait NaturePolicy: Send {
    fn reset(&mut self, sc: &Scenario, theta: usize, seed: u64) -> Result<()>;
    fn respond(&mut self, x: usize) -> Result<Vec<f64>>;
    fn last_step(&self) -> Option<&StepInfo>;
    fn name(&self) -> &str;
}

/// Draw a vertex `e_b` of the simplex with probabilities `p` (negative
/// entries from LP noise are clipped).
pub(crate) fn sample_vertex(p: &[f64], u: f64) -> Vec<f64> {
    let total: f64 = p.iter().map(|v| v.max(0.0)).sum();
    let mut acc = 0.0;
    let mut pick = p.len() - 1;
    for (i, v) in p.iter().enumerate() {
        acc += v.max(0.0) / total;
        if u < acc {
            pick = i;
            break;
        }
    }
    let mut e = vec![0.0; p.len()];
    e[pick] = 1.0;
    e
}
