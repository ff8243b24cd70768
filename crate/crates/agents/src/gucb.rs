use ib_model::{game_value, RewardSpec, Scenario};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{AgentError, AgentPolicy, Result, Turn};

/// Game UCB on a zero-sum scenario whose outcomes are `(b, a, s)` triples
/// indexed `(b·|B₁| + a)·2 + s`. Plays pure strategies, which must be
/// present on the strategy grid.
#[derive(Debug, Clone)]
pub struct GameUcb {
    reward: Option<RewardSpec>,
    na: usize,
    nb: usize,
    pure: Vec<usize>,
    r: Vec<Vec<f64>>,
    t: Vec<Vec<f64>>,
    log_term: f64,
    last_value: Option<f64>,
    rng: ChaCha8Rng,
    turn: Turn,
}

impl Default for GameUcb {
    fn default() -> Self {
        Self::new()
    }
}

impl GameUcb {
    pub fn new() -> Self {
        GameUcb {
            reward: None,
            na: 0,
            nb: 0,
            pure: Vec::new(),
            r: Vec::new(),
            t: Vec::new(),
            log_term: 0.0,
            last_value: None,
            rng: ChaCha8Rng::seed_from_u64(0),
            turn: Turn::default(),
        }
    }

    /// `P_ab = R_ab/T_ab + sqrt(2 ln(2|B₁||B₂|N²) / max(T_ab, 1))`.
    pub fn optimistic_matrix(&self) -> Vec<Vec<f64>> {
        (0..self.na)
            .map(|a| {
                (0..self.nb)
                    .map(|b| {
                        let t = self.t[a][b];
                        let mean = if t > 0.0 { self.r[a][b] / t } else { 0.0 };
                        mean + (2.0 * self.log_term / t.max(1.0)).sqrt()
                    })
                    .collect()
            })
            .collect()
    }

    /// Value of the optimistic matrix used by the last selection.
    pub fn optimistic_value(&self) -> Option<f64> {
        self.last_value
    }

    pub fn counts(&self) -> &[Vec<f64>] {
        &self.t
    }

    /// Arm index of each pure strategy.
    pub fn pure_arms(&self) -> &[usize] {
        &self.pure
    }
}

fn zerosum_shape(sc: &Scenario) -> Result<(usize, usize)> {
    let sets = sc
        .meta
        .params
        .get("sets")
        .and_then(|v| v.as_array())
        .map(|a| {
            a.iter()
                .filter_map(|v| v.as_u64())
                .map(|v| v as usize)
                .collect::<Vec<_>>()
        })
        .ok_or_else(|| AgentError::Unsupported("scenario has no conditional-bandit sets".into()))?;
    match sets[..] {
        [nb, na, 2] if 2 * na * nb == sc.space.dim && sc.space.is_simplex() => Ok((na, nb)),
        _ => Err(AgentError::Unsupported(
            "not a zero-sum outcome layout".into(),
        )),
    }
}

impl AgentPolicy for GameUcb {
    fn reset(&mut self, sc: &Scenario, horizon: usize, seed: u64) -> Result<()> {
        let (na, nb) = zerosum_shape(sc)?;
        let mut pure = Vec::with_capacity(na);
        for a in 0..na {
            let found = sc.family.arms.iter().position(|arm| {
                arm.embedding.len() == na
                    && arm
                        .embedding
                        .iter()
                        .enumerate()
                        .all(|(i, v)| (v - if i == a { 1.0 } else { 0.0 }).abs() < 1e-12)
            });
            pure.push(found.ok_or_else(|| {
                AgentError::Unsupported(format!("pure strategy {a} is not an arm"))
            })?);
        }
        let n = horizon.max(1) as f64;
        self.reward = Some(sc.reward.clone());
        self.na = na;
        self.nb = nb;
        self.pure = pure;
        self.r = vec![vec![0.0; nb]; na];
        self.t = vec![vec![0.0; nb]; na];
        self.log_term = (2.0 * (na * nb) as f64 * n * n).ln();
        self.last_value = None;
        self.rng = ChaCha8Rng::seed_from_u64(seed);
        self.turn.clear();
        Ok(())
    }

    fn select_arm(&mut self) -> Result<usize> {
        if self.reward.is_none() {
            return Err(AgentError::NotReset);
        }
        let (v, x) = game_value(&self.optimistic_matrix())?;
        self.last_value = Some(v);
        let u: f64 = self.rng.gen();
        let total: f64 = x.iter().map(|p| p.max(0.0)).sum();
        let mut acc = 0.0;
        let mut a = self.na - 1;
        for (i, p) in x.iter().enumerate() {
            acc += p.max(0.0) / total;
            if u < acc {
                a = i;
                break;
            }
        }
        self.turn.select(self.pure[a])
    }

    fn observe(&mut self, y: &[f64]) -> Result<()> {
        let x = self.turn.observe()?;
        let reward = self.reward.as_ref().ok_or(AgentError::NotReset)?;
        // Credit every (a, b) cell with its outcome mass; with vertex outcomes
        // this is the single observed triple.
        for (idx, &m) in y.iter().enumerate() {
            if m <= 0.0 {
                continue;
            }
            let (cell, _) = (idx / 2, idx % 2);
            let (b, a) = (cell / self.na, cell % self.na);
            self.t[a][b] += m;
            self.r[a][b] += m * (reward.c[x][idx] + reward.c0[x]);
        }
        Ok(())
    }

    fn name(&self) -> &str {
        "game_ucb"
    }
}
