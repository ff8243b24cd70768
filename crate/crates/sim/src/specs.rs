use ib_agents::{AgentPolicy, ConfidenceBall, GameUcb, Iucb, IucbParams, Ucb};
use ib_model::Scenario;
use ib_nature::{
    FixedMeanNature, GreedyAdversary, LowerRAdversary, LowerRParams, LowerSAdversary, LowerSParams,
    NaturePolicy,
};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::{Result, SimError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AgentKind {
    Iucb,
    Ucb,
    ConfidenceBall,
    GameUcb,
}

/// Agent selection as it appears in experiment configs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentSpec {
    pub kind: AgentKind,
    #[serde(default)]
    pub params: Value,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NatureKind {
    Greedy,
    FixedMean,
    LowerS,
    LowerR,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NatureSpec {
    pub kind: NatureKind,
    #[serde(default)]
    pub params: Value,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct SampleParams {
    sample: bool,
}

impl Default for SampleParams {
    fn default() -> Self {
        SampleParams { sample: true }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct FixedMeanParams {
    means: Vec<Vec<f64>>,
    #[serde(default = "yes")]
    sample: bool,
}

fn yes() -> bool {
    true
}

/// `null` means all defaults.
fn parse<T: DeserializeOwned + Default>(v: &Value) -> Result<T> {
    if v.is_null() {
        Ok(T::default())
    } else {
        Ok(serde_json::from_value(v.clone())?)
    }
}

fn no_params(v: &Value, kind: &str) -> Result<()> {
    match v {
        Value::Null => Ok(()),
        Value::Object(m) if m.is_empty() => Ok(()),
        _ => Err(SimError::InvalidParameter(format!(
            "{kind} takes no parameters"
        ))),
    }
}

/// A configured agent that can be stamped out once per episode. IUCB's
/// scenario-dependent setup is computed once, in the prototype.
#[derive(Debug, Clone)]
pub enum AgentFactory {
    Iucb(Iucb),
    Ucb(Ucb),
    ConfidenceBall(ConfidenceBall),
    GameUcb(GameUcb),
}

impl AgentFactory {
    pub fn make(&self) -> Box<dyn AgentPolicy> {
        match self {
            AgentFactory::Iucb(a) => Box::new(a.clone()),
            AgentFactory::Ucb(a) => Box::new(a.clone()),
            AgentFactory::ConfidenceBall(a) => Box::new(a.clone()),
            AgentFactory::GameUcb(a) => Box::new(a.clone()),
        }
    }
}

impl AgentSpec {
    pub fn factory(&self, sc: &Scenario, horizon: usize) -> Result<AgentFactory> {
        let mut f = match self.kind {
            AgentKind::Iucb => AgentFactory::Iucb(Iucb::new(parse::<IucbParams>(&self.params)?)?),
            AgentKind::Ucb => {
                no_params(&self.params, "ucb")?;
                AgentFactory::Ucb(Ucb::new())
            }
            AgentKind::ConfidenceBall => {
                no_params(&self.params, "confidence_ball")?;
                AgentFactory::ConfidenceBall(ConfidenceBall::new())
            }
            AgentKind::GameUcb => {
                no_params(&self.params, "game_ucb")?;
                AgentFactory::GameUcb(GameUcb::new())
            }
        };
        // Resetting the prototype checks the scenario is supported and
        // caches whatever the agent precomputes.
        match &mut f {
            AgentFactory::Iucb(a) => a.reset(sc, horizon, 0)?,
            AgentFactory::Ucb(a) => a.reset(sc, horizon, 0)?,
            AgentFactory::ConfidenceBall(a) => a.reset(sc, horizon, 0)?,
            AgentFactory::GameUcb(a) => a.reset(sc, horizon, 0)?,
        }
        Ok(f)
    }
}

impl NatureSpec {
    pub fn make(&self) -> Result<Box<dyn NaturePolicy>> {
        Ok(match self.kind {
            NatureKind::Greedy => Box::new(GreedyAdversary::new(
                parse::<SampleParams>(&self.params)?.sample,
            )),
            NatureKind::FixedMean => {
                let p: FixedMeanParams = serde_json::from_value(self.params.clone())?;
                Box::new(FixedMeanNature::new(p.means, p.sample))
            }
            NatureKind::LowerS => {
                Box::new(LowerSAdversary::new(parse::<LowerSParams>(&self.params)?))
            }
            NatureKind::LowerR => {
                let p: Option<LowerRParams> = if self.params.is_null() {
                    None
                } else {
                    Some(serde_json::from_value(self.params.clone())?)
                };
                Box::new(LowerRAdversary::new(p))
            }
        })
    }
}
