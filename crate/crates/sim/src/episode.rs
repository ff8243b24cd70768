use ib_agents::{AgentPolicy, IucbTrace};
use ib_model::Scenario;
use ib_nature::NaturePolicy;
use serde::{Deserialize, Serialize};

use crate::Result;

/// Independent seed for stream `stream` of run `seed` (splitmix64 finaliser).
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed.wrapping_add(stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub scenario: String,
    pub theta: usize,
    pub seed: u64,
    pub horizon: usize,
    pub arms: Vec<usize>,
    pub outcomes: Vec<Vec<f64>>,
    pub rewards: Vec<f64>,
    pub flags: Vec<String>,
    /// Policy error that stopped the episode early.
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iucb: Option<IucbTrace>,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.arms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arms.is_empty()
    }
}

/// Play `horizon` rounds. Reset failures are returned as errors; failures
/// during play end the episode and are recorded in `error`.
pub fn run_episode(
    agent: &mut dyn AgentPolicy,
    nature: &mut dyn NaturePolicy,
    sc: &Scenario,
    theta: usize,
    horizon: usize,
    seed: u64,
) -> Result<Trace> {
    agent.reset(sc, horizon, derive_seed(seed, 0))?;
    nature.reset(sc, theta, derive_seed(seed, 1))?;
    let mut t = Trace {
        scenario: sc.name.clone(),
        theta,
        seed,
        horizon,
        arms: Vec::with_capacity(horizon),
        outcomes: Vec::with_capacity(horizon),
        rewards: Vec::with_capacity(horizon),
        flags: Vec::new(),
        error: None,
        iucb: None,
    };
    for _ in 0..horizon {
        let step = agent.select_arm().map_err(|e| e.to_string()).and_then(|x| {
            let y = nature.respond(x).map_err(|e| e.to_string())?;
            agent.observe(&y).map_err(|e| e.to_string())?;
            Ok((x, y))
        });
        match step {
            Ok((x, y)) => {
                t.rewards.push(sc.reward.eval(x, &y));
                t.arms.push(x);
                t.outcomes.push(y);
            }
            Err(e) => {
                t.error = Some(e);
                break;
            }
        }
    }
    t.flags = agent.flags();
    t.iucb = agent.iucb_trace().cloned();
    Ok(t)
}

/// Cumulative regret `N'·ME* - Σ_{n<N'} r(x_n, y_n)` for every prefix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegretRecord {
    pub me_star: f64,
    pub cumulative: Vec<f64>,
}

pub fn regret_trace(trace: &Trace, sc: &Scenario, theta: usize) -> Result<RegretRecord> {
    let (_, me_star) = sc.optimal_arm(theta)?;
    let mut acc = 0.0;
    let cumulative = trace
        .rewards
        .iter()
        .enumerate()
        .map(|(n, r)| {
            acc += r;
            (n + 1) as f64 * me_star - acc
        })
        .collect();
    Ok(RegretRecord {
        me_star,
        cumulative,
    })
}
