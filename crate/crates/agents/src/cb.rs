use ib_model::{RewardSpec, Scenario};
use ib_numkit::{RealMatrix, RealVector};

use crate::{argmax_first, AgentError, AgentPolicy, Result, Turn};

/// Relative determinant gain below which spanner swaps stop.
const SWAP_GAIN: f64 = 1e-9;

fn det_of(arms: &[Vec<f64>], cols: &[usize]) -> f64 {
    let d = cols.len();
    RealMatrix::from_fn(d, d, |i, j| arms[cols[j]][i])
        .determinant()
        .abs()
}

/// Indices of `D` arms whose matrix has locally maximal `|det|`: start from a
/// greedy basis, then swap single columns while the determinant grows by
/// more than a relative `1e-9`.
pub fn barycentric_spanner(arms: &[Vec<f64>]) -> Result<Vec<usize>> {
    let d = arms.first().map_or(0, |a| a.len());
    if d == 0 || arms.iter().any(|a| a.len() != d) {
        return Err(AgentError::Unsupported(
            "arm embeddings must share a positive dimension".into(),
        ));
    }
    // Greedy basis: add arms that raise the rank.
    let mut cols: Vec<usize> = Vec::new();
    for (i, _) in arms.iter().enumerate() {
        let mut trial = cols.clone();
        trial.push(i);
        let m = RealMatrix::from_fn(d, trial.len(), |r, c| arms[trial[c]][r]);
        if ib_numkit::rank(&m) == trial.len() {
            cols = trial;
        }
        if cols.len() == d {
            break;
        }
    }
    if cols.len() < d {
        return Err(AgentError::Unsupported(
            "arm embeddings do not span the space".into(),
        ));
    }
    let mut best = det_of(arms, &cols);
    loop {
        let mut improved = false;
        for j in 0..d {
            for a in 0..arms.len() {
                if cols.contains(&a) {
                    continue;
                }
                let old = cols[j];
                cols[j] = a;
                let v = det_of(arms, &cols);
                if v > best * (1.0 + SWAP_GAIN) {
                    best = v;
                    improved = true;
                } else {
                    cols[j] = old;
                }
            }
        }
        if !improved {
            return Ok(cols);
        }
    }
}

/// `β_n = max(128 D ln n ln(N n²), (8/3 ln(N n²))²)`.
pub(crate) fn beta(d: usize, n: usize, horizon: usize) -> f64 {
    let (n, nn) = (n as f64, horizon as f64);
    let l = (nn * n * n).ln();
    (128.0 * d as f64 * n.ln() * l).max((8.0 / 3.0 * l).powi(2))
}

/// Confidence Ball for linear bandits over the arm embeddings. The optimistic
/// arm maximises `x·θ̂ + sqrt(β xᵀX⁻¹x)`, the largest value of `x·θ` over the
/// ellipsoid `(θ - θ̂)ᵀ X (θ - θ̂) <= β` with `θ̂ = X⁻¹η`.
#[derive(Debug, Clone)]
pub struct ConfidenceBall {
    reward: Option<RewardSpec>,
    arms: Vec<Vec<f64>>,
    spanner: Vec<usize>,
    x: RealMatrix,
    eta: RealVector,
    n: usize,
    horizon: usize,
    turn: Turn,
}

impl ConfidenceBall {
    pub fn new() -> Self {
        ConfidenceBall {
            reward: None,
            arms: Vec::new(),
            spanner: Vec::new(),
            x: RealMatrix::zeros(0, 0),
            eta: RealVector::zeros(0),
            n: 0,
            horizon: 1,
            turn: Turn::default(),
        }
    }

    pub fn spanner(&self) -> &[usize] {
        &self.spanner
    }

    pub fn design(&self) -> &RealMatrix {
        &self.x
    }

    /// Regularised least-squares estimate `X⁻¹η`.
    pub fn estimate(&self) -> Result<RealVector> {
        let ch = self.x.clone().cholesky().ok_or(AgentError::SingularX)?;
        Ok(ch.solve(&self.eta))
    }

    /// Optimistic value `x·θ̂ + sqrt(β xᵀX⁻¹x)` of every arm at round `n`.
    pub fn scores(&self, n: usize) -> Result<Vec<f64>> {
        let ch = self.x.clone().cholesky().ok_or(AgentError::SingularX)?;
        let theta = ch.solve(&self.eta);
        let b = beta(self.arms[0].len(), n, self.horizon);
        Ok(self
            .arms
            .iter()
            .map(|a| {
                let v = RealVector::from_column_slice(a);
                let q = v.dot(&ch.solve(&v)).max(0.0);
                v.dot(&theta) + (b * q).sqrt()
            })
            .collect())
    }
}

impl Default for ConfidenceBall {
    fn default() -> Self {
        Self::new()
    }
}

impl AgentPolicy for ConfidenceBall {
    fn reset(&mut self, sc: &Scenario, horizon: usize, _seed: u64) -> Result<()> {
        let arms: Vec<Vec<f64>> = sc.family.arms.iter().map(|a| a.embedding.clone()).collect();
        let spanner = barycentric_spanner(&arms)?;
        let d = arms[0].len();
        let mut x = RealMatrix::zeros(d, d);
        for &i in &spanner {
            let v = RealVector::from_column_slice(&arms[i]);
            x += &v * v.transpose();
        }
        self.reward = Some(sc.reward.clone());
        self.arms = arms;
        self.spanner = spanner;
        self.x = x;
        self.eta = RealVector::zeros(d);
        self.n = 0;
        self.horizon = horizon.max(1);
        self.turn.clear();
        Ok(())
    }

    fn select_arm(&mut self) -> Result<usize> {
        if self.reward.is_none() {
            return Err(AgentError::NotReset);
        }
        let s = self.scores(self.n + 1)?;
        self.turn.select(argmax_first(s))
    }

    fn observe(&mut self, y: &[f64]) -> Result<()> {
        let x = self.turn.observe()?;
        let r = self.reward.as_ref().ok_or(AgentError::NotReset)?.eval(x, y);
        let v = RealVector::from_column_slice(&self.arms[x]);
        self.x += &v * v.transpose();
        self.eta += &v * r;
        self.n += 1;
        Ok(())
    }

    fn name(&self) -> &str {
        "confidence_ball"
    }
}
