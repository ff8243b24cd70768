use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::{
    lower_prevision, optimal_arm, upper_prevision, validate_family, HypothesisFamily, ModelError,
    OutcomeSpace, Result, RewardSpec, ValidationReport,
};

/// A value the scenario is expected to reproduce, with where it comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KnownValue {
    pub quantity: String,
    pub value: f64,
    pub tolerance: f64,
    pub provenance: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Meta {
    #[serde(default)]
    pub grid: BTreeMap<String, f64>,
    #[serde(default)]
    pub known_values: Vec<KnownValue>,
    /// Builder parameters needed downstream (adversary constructions etc.).
    #[serde(default)]
    pub params: BTreeMap<String, serde_json::Value>,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl Meta {
    pub fn param_f64(&self, key: &str) -> Option<f64> {
        self.params.get(key).and_then(|v| v.as_f64())
    }

    pub fn param_vec(&self, key: &str) -> Option<Vec<f64>> {
        self.params
            .get(key)?
            .as_array()?
            .iter()
            .map(|v| v.as_f64())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub space: OutcomeSpace,
    pub family: HypothesisFamily,
    pub reward: RewardSpec,
    #[serde(default)]
    pub meta: Meta,
}

impl Scenario {
    pub fn validate(&self) -> ValidationReport {
        let mut rep = validate_family(&self.family, &self.space);
        if self.reward.c.len() != self.family.num_arms()
            || self.reward.c0.len() != self.family.num_arms()
        {
            rep.structural
                .push("reward needs one covector and offset per arm".into());
        } else if self.reward.c.iter().any(|c| c.len() != self.space.dim) {
            rep.structural
                .push("reward covector length differs from the outcome dimension".into());
        }
        rep
    }

    /// Fail unless the scenario passes every structural and per-cell check.
    pub fn ensure_valid(&self) -> Result<()> {
        let rep = self.validate();
        if rep.passed() {
            Ok(())
        } else {
            let mut msg = rep.structural.join("; ");
            if let Some(c) = rep.failures().first() {
                msg.push_str(&format!(
                    " cell (arm {}, theta {}) onto={} feasible={}",
                    c.arm, c.theta, c.onto, c.feasible
                ));
            }
            Err(ModelError::InvalidScenario(msg))
        }
    }

    pub fn lower(&self, x: usize, theta: usize) -> Result<f64> {
        lower_prevision(&self.family, &self.reward, &self.space, x, theta)
    }

    pub fn upper(&self, x: usize, theta: usize) -> Result<f64> {
        upper_prevision(&self.family, &self.reward, &self.space, x, theta)
    }

    pub fn optimal_arm(&self, theta: usize) -> Result<(usize, f64)> {
        optimal_arm(&self.family, &self.reward, &self.space, theta)
    }

    /// Optimal arm and value for every grid hypothesis.
    pub fn optimal_arms(&self) -> Result<Vec<(usize, f64)>> {
        (0..self.family.num_hypotheses())
            .map(|t| self.optimal_arm(t))
            .collect()
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| ModelError::InvalidScenario(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| ModelError::InvalidScenario(e.to_string()))
    }

    pub fn known(&self, quantity: &str) -> Option<&KnownValue> {
        self.meta
            .known_values
            .iter()
            .find(|k| k.quantity == quantity)
    }
}
