use ib_model::{worst_outcome, ModelError, Scenario};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{sample_vertex, NatureError, NaturePolicy, Result, StepInfo};

const FEAS_TOL: f64 = 1e-7;

/// Answers every pull with the reward-minimising point of the credal
/// section. On a simplex body the answer is a vertex drawn with those
/// probabilities, unless `sample` is off.
#[derive(Debug, Clone)]
pub struct GreedyAdversary {
    sample: bool,
    worst: Vec<Vec<f64>>,
    simplex: bool,
    rng: ChaCha8Rng,
    last: Option<StepInfo>,
}

impl GreedyAdversary {
    pub fn new(sample: bool) -> Self {
        GreedyAdversary {
            sample,
            worst: Vec::new(),
            simplex: false,
            rng: ChaCha8Rng::seed_from_u64(0),
            last: None,
        }
    }
}

impl NaturePolicy for GreedyAdversary {
    fn reset(&mut self, sc: &Scenario, theta: usize, seed: u64) -> Result<()> {
        self.worst = (0..sc.family.num_arms())
            .map(
                |x| match worst_outcome(&sc.family, &sc.reward, &sc.space, x, theta) {
                    Err(ModelError::InfeasibleCredalSet { .. }) => {
                        Err(NatureError::InfeasibleCredalSet { arm: x })
                    }
                    r => Ok(r?),
                },
            )
            .collect::<Result<_>>()?;
        self.simplex = sc.space.is_simplex();
        self.rng = ChaCha8Rng::seed_from_u64(seed);
        self.last = None;
        Ok(())
    }

    fn respond(&mut self, x: usize) -> Result<Vec<f64>> {
        let mean = self.worst.get(x).ok_or(NatureError::NotReset)?.clone();
        let (mode, y) = if self.simplex && self.sample {
            ("vertex", sample_vertex(&mean, self.rng.gen()))
        } else {
            ("mean", mean.clone())
        };
        self.last = Some(StepInfo {
            mode: mode.into(),
            mean,
            prob: None,
        });
        Ok(y)
    }

    fn last_step(&self) -> Option<&StepInfo> {
        self.last.as_ref()
    }

    fn name(&self) -> &str {
        "greedy"
    }
}

/// A fixed mean per arm, checked against the credal sections at reset.
#[derive(Debug, Clone)]
pub struct FixedMeanNature {
    means: Vec<Vec<f64>>,
    sample: bool,
    simplex: bool,
    rng: ChaCha8Rng,
    last: Option<StepInfo>,
}

impl FixedMeanNature {
    pub fn new(means: Vec<Vec<f64>>, sample: bool) -> Self {
        FixedMeanNature {
            means,
            sample,
            simplex: false,
            rng: ChaCha8Rng::seed_from_u64(0),
            last: None,
        }
    }
}

impl NaturePolicy for FixedMeanNature {
    fn reset(&mut self, sc: &Scenario, theta: usize, seed: u64) -> Result<()> {
        if self.means.len() != sc.family.num_arms() {
            return Err(NatureError::InvalidParameter(
                "need one mean per arm".into(),
            ));
        }
        for (x, m) in self.means.iter().enumerate() {
            if m.len() != sc.space.dim || !sc.space.body.contains(m, FEAS_TOL) {
                return Err(NatureError::IncompatibleMean { arm: x });
            }
            let f = sc.family.f_matrix(x, theta)?;
            let resid = (0..f.nrows())
                .map(|w| (0..f.ncols()).map(|j| f[(w, j)] * m[j]).sum::<f64>().abs())
                .fold(0.0, f64::max);
            if resid > FEAS_TOL {
                return Err(NatureError::IncompatibleMean { arm: x });
            }
        }
        self.simplex = sc.space.is_simplex();
        self.rng = ChaCha8Rng::seed_from_u64(seed);
        self.last = None;
        Ok(())
    }

    fn respond(&mut self, x: usize) -> Result<Vec<f64>> {
        let mean = self.means.get(x).ok_or(NatureError::NotReset)?.clone();
        let (mode, y) = if self.simplex && self.sample {
            ("vertex", sample_vertex(&mean, self.rng.gen()))
        } else {
            ("mean", mean.clone())
        };
        self.last = Some(StepInfo {
            mode: mode.into(),
            mean,
            prob: None,
        });
        Ok(y)
    }

    fn last_step(&self) -> Option<&StepInfo> {
        self.last.as_ref()
    }

    fn name(&self) -> &str {
        "fixed_mean"
    }
}
