use ib_model::{RewardSpec, Scenario};

use crate::{argmax_first, AgentError, AgentPolicy, Result, Turn};

/// Finite-armed UCB: one pull per arm, then `r_x/t_x + 2 sqrt(ln N / t_x)`.
#[derive(Debug, Clone, Default)]
pub struct Ucb {
    reward: Option<RewardSpec>,
    ln_n: f64,
    sums: Vec<f64>,
    counts: Vec<usize>,
    turn: Turn,
}

impl Ucb {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// Current index of every arm; unexplored arms are `+∞`.
    pub fn indices(&self) -> Vec<f64> {
        self.sums
            .iter()
            .zip(&self.counts)
            .map(|(&r, &t)| {
                if t == 0 {
                    f64::INFINITY
                } else {
                    r / t as f64 + 2.0 * (self.ln_n / t as f64).sqrt()
                }
            })
            .collect()
    }
}

impl AgentPolicy for Ucb {
    fn reset(&mut self, sc: &Scenario, horizon: usize, _seed: u64) -> Result<()> {
        let k = sc.family.num_arms();
        if k == 0 {
            return Err(AgentError::Unsupported("no arms".into()));
        }
        self.reward = Some(sc.reward.clone());
        self.ln_n = (horizon.max(1) as f64).ln();
        self.sums = vec![0.0; k];
        self.counts = vec![0; k];
        self.turn.clear();
        Ok(())
    }

    fn select_arm(&mut self) -> Result<usize> {
        if self.reward.is_none() {
            return Err(AgentError::NotReset);
        }
        // Round robin first: the first unexplored arm wins outright.
        let arm = match self.counts.iter().position(|&t| t == 0) {
            Some(a) => a,
            None => argmax_first(self.indices()),
        };
        self.turn.select(arm)
    }

    fn observe(&mut self, y: &[f64]) -> Result<()> {
        let x = self.turn.observe()?;
        let r = self.reward.as_ref().ok_or(AgentError::NotReset)?.eval(x, y);
        self.sums[x] += r;
        self.counts[x] += 1;
        Ok(())
    }

    fn name(&self) -> &str {
        "ucb"
    }
}
