use std::path::{Path, PathBuf};

use ib_model::Scenario;
use ib_scenarios::ScenarioSource;
use ib_sim::{AgentSpec, NatureSpec};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepTag {
    #[serde(rename = "sweep")]
    Sweep,
}

/// `theta` is either a hypothesis index or the string `"sweep"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ThetaChoice {
    Index(usize),
    Sweep(SweepTag),
}

impl ThetaChoice {
    pub fn resolve(&self, sc: &Scenario) -> Result<Vec<usize>> {
        let h = sc.family.num_hypotheses();
        match *self {
            ThetaChoice::Index(t) if t < h => Ok(vec![t]),
            ThetaChoice::Index(t) => Err(CliError::Validation(format!(
                "theta {t} outside a grid of {h} hypotheses"
            ))),
            ThetaChoice::Sweep(_) => Ok((0..h).collect()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: ScenarioSource,
    pub agent: AgentSpec,
    pub nature: NatureSpec,
    pub theta: ThetaChoice,
    #[serde(rename = "N")]
    pub horizon: usize,
    pub reps: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn check(&self) -> Result<()> {
        if self.horizon == 0 || self.reps == 0 {
            return Err(CliError::Schema("N and reps must be positive".into()));
        }
        Ok(())
    }
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConcentrationConfig {
    pub scenario: ScenarioSource,
    pub nature: NatureSpec,
    pub theta: usize,
    pub arm: usize,
    pub tau: Vec<usize>,
    pub delta: f64,
    pub reps: usize,
    #[serde(default)]
    pub seed: u64,
    /// Free constant in the exponent of the generic bound.
    #[serde(default = "one")]
    pub c_exp: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl ConcentrationConfig {
    pub fn check(&self) -> Result<()> {
        if self.tau.is_empty() || self.tau.contains(&0) || self.reps == 0 {
            return Err(CliError::Schema(
                "tau must be a nonempty list of positive values and reps positive".into(),
            ));
        }
        if !(self.delta > 0.0) {
            return Err(CliError::Schema("delta must be positive".into()));
        }
        Ok(())
    }
}

/// Read and parse a JSON file; any parse or shape error is a schema error.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<(T, String)> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let v = serde_json::from_str(&text)
        .map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))?;
    Ok((v, text))
}

/// Directory that relative file references in `path` are resolved against.
pub fn base_dir(path: &Path) -> Option<&Path> {
    path.parent().filter(|p| !p.as_os_str().is_empty())
}

/// Load a scenario reference without enforcing validity, so that `validate`
/// can report on broken scenarios. Builders validate on their own.
pub fn load_unchecked(src: &ScenarioSource, base: Option<&Path>) -> Result<Scenario> {
    match src {
        ScenarioSource::Named { .. } => Ok(src.load(base)?),
        ScenarioSource::Inline(sc) => Ok((**sc).clone()),
        ScenarioSource::File { file } => {
            let path = match base {
                Some(b) if file.is_relative() => b.join(file),
                _ => file.clone(),
            };
            let (sc, _) = read_json::<Scenario>(&path)?;
            Ok(sc)
        }
    }
}
