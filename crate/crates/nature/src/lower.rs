use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use ib_model::Scenario;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{NatureError, NaturePolicy, Result, StepInfo};

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn meta_f64(sc: &Scenario, key: &str) -> Result<f64> {
    sc.meta
        .param_f64(key)
        .ok_or_else(|| NatureError::InvalidParameter(format!("scenario meta lacks `{key}`")))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LowerSParams {
    pub delta: f64,
}

impl Default for LowerSParams {
    fn default() -> Self {
        LowerSParams { delta: 0.25 }
    }
}

/// The small-sine adversary. While every arm so far has `u*·x >= -1/(1+2δ)`
/// and `y_⊥ = e0` has not appeared, answers with the unique law on
/// `{y_δ(x), y_⊥}` whose mean is compatible, `y_δ(x) = (0, 1, -(½+δ)x)`.
/// Afterwards it answers `y_0(x) = (α(1+x·u*), 1-α(1+x·u*), -x/2)`.
#[derive(Debug, Clone)]
pub struct LowerSAdversary {
    pub params: LowerSParams,
    alpha: f64,
    u_star: Vec<f64>,
    arms: Vec<Vec<f64>>,
    two_point: bool,
    rng: ChaCha8Rng,
    last: Option<StepInfo>,
}

impl LowerSAdversary {
    pub fn new(params: LowerSParams) -> Self {
        LowerSAdversary {
            params,
            alpha: 0.0,
            u_star: Vec::new(),
            arms: Vec::new(),
            two_point: true,
            rng: ChaCha8Rng::seed_from_u64(0),
            last: None,
        }
    }

    pub fn u_star(&self) -> &[f64] {
        &self.u_star
    }

    /// `P[y_δ(x)]` in two-point mode.
    pub fn prob_y_delta(&self, x: &[f64]) -> f64 {
        (1.0 - self.alpha)
            / (1.0 + self.alpha * (1.0 + 2.0 * self.params.delta) * dot(&self.u_star, x))
    }

    pub fn y_delta(&self, x: &[f64]) -> Vec<f64> {
        let s = 0.5 + self.params.delta;
        [0.0, 1.0]
            .into_iter()
            .chain(x.iter().map(|v| -s * v))
            .collect()
    }

    pub fn y_perp(&self) -> Vec<f64> {
        let mut y = vec![0.0; self.u_star.len() + 2];
        y[0] = 1.0;
        y
    }

    pub fn y_zero(&self, x: &[f64]) -> Vec<f64> {
        let a = self.alpha * (1.0 + dot(x, &self.u_star));
        [a, 1.0 - a]
            .into_iter()
            .chain(x.iter().map(|v| -0.5 * v))
            .collect()
    }

    pub fn in_two_point_mode(&self) -> bool {
        self.two_point
    }
}

impl NaturePolicy for LowerSAdversary {
    fn reset(&mut self, sc: &Scenario, theta: usize, seed: u64) -> Result<()> {
        let d = self.params.delta;
        if !(d > 0.0 && d < 0.5) {
            return Err(NatureError::InvalidParameter(
                "delta must lie in (0, 1/2)".into(),
            ));
        }
        self.alpha = meta_f64(sc, "alpha")?;
        let th = sc.family.theta(theta)?;
        self.u_star = th[2..].iter().map(|v| v / (2.0 * self.alpha)).collect();
        self.arms = sc.family.arms.iter().map(|a| a.embedding.clone()).collect();
        self.two_point = true;
        self.rng = ChaCha8Rng::seed_from_u64(seed);
        self.last = None;
        Ok(())
    }

    fn respond(&mut self, x: usize) -> Result<Vec<f64>> {
        let xv = self.arms.get(x).ok_or(NatureError::NotReset)?.clone();
        if self.two_point && dot(&self.u_star, &xv) < -1.0 / (1.0 + 2.0 * self.params.delta) {
            self.two_point = false;
        }
        if self.two_point {
            let p = self.prob_y_delta(&xv);
            let (yd, yp) = (self.y_delta(&xv), self.y_perp());
            let mean = yd
                .iter()
                .zip(&yp)
                .map(|(a, b)| p * a + (1.0 - p) * b)
                .collect();
            let y = if self.rng.gen::<f64>() < p {
                yd
            } else {
                self.two_point = false;
                yp
            };
            self.last = Some(StepInfo {
                mode: "two_point".into(),
                mean,
                prob: Some(p),
            });
            Ok(y)
        } else {
            let y = self.y_zero(&xv);
            self.last = Some(StepInfo {
                mode: "fallback".into(),
                mean: y.clone(),
                prob: None,
            });
            Ok(y)
        }
    }

    fn last_step(&self) -> Option<&StepInfo> {
        self.last.as_ref()
    }

    fn name(&self) -> &str {
        "lower_s"
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LowerRParams {
    pub psi: f64,
    pub delta: f64,
}

impl LowerRParams {
    /// `ψ` halfway through its admissible interval and `δ` at twice its
    /// lower limit (capped below 1).
    pub fn recommended(lambda: f64, alpha: f64) -> Self {
        let lo = FRAC_PI_4.max(0.75 * PI - alpha);
        let psi = 0.5 * (lo + alpha);
        let floor = Self::delta_floor(lambda, alpha, psi);
        let delta = if 2.0 * floor < 1.0 {
            2.0 * floor
        } else {
            0.5 * (floor + 1.0)
        };
        LowerRParams { psi, delta }
    }

    /// `1 / ((λ+1) tan(α + ψ - π/2))`; `δ` must exceed it.
    pub fn delta_floor(lambda: f64, alpha: f64, psi: f64) -> f64 {
        1.0 / ((lambda + 1.0) * (alpha + psi - FRAC_PI_2).tan())
    }

    pub fn check(&self, lambda: f64, alpha: f64) -> Result<()> {
        let bad = |m: &str| Err(NatureError::InvalidParameter(m.into()));
        if !(self.psi > FRAC_PI_4 && self.psi < alpha) {
            return bad("psi must lie in (π/4, α)");
        }
        if alpha + self.psi <= 0.75 * PI {
            return bad("α + ψ must exceed 3π/4");
        }
        if !(self.delta > Self::delta_floor(lambda, alpha, self.psi) && self.delta < 1.0) {
            return bad("delta must lie in (1/((λ+1) tan(α+ψ-π/2)), 1)");
        }
        Ok(())
    }
}

/// The large-`R` adversary. While every arm so far has `|x·θ*| > δ`, the
/// answer is `y± = (cos ψ, ±sin ψ, 1)` with the probability of `y+` set so
/// that the mean lies on the credal chord; afterwards the chord endpoint
/// with nonnegative first coordinate.
#[derive(Debug, Clone)]
pub struct LowerRAdversary {
    requested: Option<LowerRParams>,
    pub params: LowerRParams,
    lambda: f64,
    theta: [f64; 2],
    arms: Vec<[f64; 2]>,
    two_point: bool,
    rng: ChaCha8Rng,
    last: Option<StepInfo>,
}

impl LowerRAdversary {
    /// `None` uses [`LowerRParams::recommended`] for the scenario's `λ, α`.
    pub fn new(params: Option<LowerRParams>) -> Self {
        LowerRAdversary {
            requested: params,
            params: params.unwrap_or(LowerRParams {
                psi: 0.0,
                delta: 0.0,
            }),
            lambda: 0.0,
            theta: [0.0; 2],
            arms: Vec::new(),
            two_point: true,
            rng: ChaCha8Rng::seed_from_u64(0),
            last: None,
        }
    }

    /// `(I + λxxᵀ)θ*`, the normal of the credal chord.
    pub fn tilted(&self, x: [f64; 2]) -> [f64; 2] {
        let s = self.lambda * (x[0] * self.theta[0] + x[1] * self.theta[1]);
        [self.theta[0] + s * x[0], self.theta[1] + s * x[1]]
    }

    /// Probability of `y+` that puts the mean on the chord.
    pub fn prob_plus(&self, x: [f64; 2]) -> f64 {
        let t = self.tilted(x);
        0.5 * (1.0 - t[0] / (t[1] * self.params.psi.tan()))
    }

    pub fn y_plus(&self) -> Vec<f64> {
        vec![self.params.psi.cos(), self.params.psi.sin(), 1.0]
    }

    pub fn y_minus(&self) -> Vec<f64> {
        vec![self.params.psi.cos(), -self.params.psi.sin(), 1.0]
    }

    pub fn y_star(&self, x: [f64; 2]) -> Vec<f64> {
        let t = self.tilted(x);
        let n = t[0].hypot(t[1]);
        let (mut a, mut b) = (-t[1] / n, t[0] / n);
        if a < 0.0 {
            a = -a;
            b = -b;
        }
        vec![a, b, 1.0]
    }

    pub fn in_two_point_mode(&self) -> bool {
        self.two_point
    }

    pub fn arm(&self, x: usize) -> Option<[f64; 2]> {
        self.arms.get(x).copied()
    }

    pub fn theta(&self) -> [f64; 2] {
        self.theta
    }
}

impl NaturePolicy for LowerRAdversary {
    fn reset(&mut self, sc: &Scenario, theta: usize, seed: u64) -> Result<()> {
        self.lambda = meta_f64(sc, "lambda")?;
        let alpha = meta_f64(sc, "alpha")?;
        self.params = self
            .requested
            .unwrap_or_else(|| LowerRParams::recommended(self.lambda, alpha));
        self.params.check(self.lambda, alpha)?;
        let th = sc.family.theta(theta)?;
        self.theta = [th[0], th[1]];
        self.arms = sc
            .family
            .arms
            .iter()
            .map(|a| [a.embedding[0], a.embedding[1]])
            .collect();
        self.two_point = true;
        self.rng = ChaCha8Rng::seed_from_u64(seed);
        self.last = None;
        Ok(())
    }

    fn respond(&mut self, x: usize) -> Result<Vec<f64>> {
        let xv = self.arm(x).ok_or(NatureError::NotReset)?;
        if (xv[0] * self.theta[0] + xv[1] * self.theta[1]).abs() <= self.params.delta {
            self.two_point = false;
        }
        if self.two_point {
            let p = self.prob_plus(xv);
            if !(-1e-12..=1.0 + 1e-12).contains(&p) {
                return Err(NatureError::InvalidParameter(format!(
                    "two-point probability {p} outside [0, 1]"
                )));
            }
            let p = p.clamp(0.0, 1.0);
            let (c, s) = (self.params.psi.cos(), self.params.psi.sin());
            let mean = vec![c, (2.0 * p - 1.0) * s, 1.0];
            let y = if self.rng.gen::<f64>() < p {
                self.y_plus()
            } else {
                self.y_minus()
            };
            self.last = Some(StepInfo {
                mode: "two_point".into(),
                mean,
                prob: Some(p),
            });
            Ok(y)
        } else {
            let y = self.y_star(xv);
            self.last = Some(StepInfo {
                mode: "fallback".into(),
                mean: y.clone(),
                prob: None,
            });
            Ok(y)
        }
    }

    fn last_step(&self) -> Option<&StepInfo> {
        self.last.as_ref()
    }

    fn name(&self) -> &str {
        "lower_r"
    }
}
