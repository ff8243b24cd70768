use ib_geometry::{ConvexBody, NormSpec};
use serde::{Deserialize, Serialize};

use crate::{ModelError, Result};

/// The outcome space: a body inside the hyperplane `mu(y) = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutcomeSpace {
    pub dim: usize,
    pub mu: Vec<f64>,
    pub body: ConvexBody,
}

impl OutcomeSpace {
    pub fn new(mu: Vec<f64>, body: ConvexBody) -> Self {
        OutcomeSpace {
            dim: mu.len(),
            mu,
            body,
        }
    }

    /// The probability simplex over `labels` outcomes.
    pub fn simplex(labels: usize) -> Self {
        Self::new(vec![1.0; labels], ConvexBody::simplex(labels))
    }

    pub fn is_simplex(&self) -> bool {
        matches!(self.body, ConvexBody::SimplexOfLabels { .. })
    }

    /// Norm whose unit ball is the absolute convex hull of the body.
    pub fn y_norm(&self) -> Result<NormSpec> {
        Ok(self.body.hull_norm()?)
    }

    pub fn mu_of(&self, y: &[f64]) -> f64 {
        self.mu.iter().zip(y).map(|(a, b)| a * b).sum()
    }

    pub fn validate(&self) -> Result<()> {
        if self.mu.len() != self.dim || self.body.dim() != self.dim {
            return Err(ModelError::InvalidScenario(
                "space dimension disagrees with mu or body".into(),
            ));
        }
        self.body.validate()?;
        for v in self.body.extreme_points(64) {
            if (self.mu_of(&v) - 1.0).abs() > 1e-9 {
                return Err(ModelError::InvalidScenario(
                    "body leaves the hyperplane mu = 1".into(),
                ));
            }
        }
        Ok(())
    }
}

/// A reward affine in the outcome: `r(x, y) = c[x]·y + c0[x]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RewardSpec {
    pub c: Vec<Vec<f64>>,
    pub c0: Vec<f64>,
}

impl RewardSpec {
    /// The same covector for every arm.
    pub fn uniform(arms: usize, c: Vec<f64>, c0: f64) -> Self {
        RewardSpec {
            c: vec![c; arms],
            c0: vec![c0; arms],
        }
    }

    pub fn eval(&self, x: usize, y: &[f64]) -> f64 {
        self.c[x].iter().zip(y).map(|(a, b)| a * b).sum::<f64>() + self.c0[x]
    }

    /// Largest Lipschitz ratio `|r(x,v) - r(x,v')| / ‖v - v'‖` over pairs of
    /// extreme points (a grid for round bodies).
    pub fn lipschitz_ratio(&self, space: &OutcomeSpace) -> Result<f64> {
        let norm = space.y_norm()?;
        let pts = space.body.extreme_points(48);
        let mut worst = 0.0f64;
        for x in 0..self.c.len() {
            for (i, v) in pts.iter().enumerate() {
                for w in &pts[i + 1..] {
                    let d: Vec<f64> = v.iter().zip(w).map(|(a, b)| a - b).collect();
                    let nd = ib_geometry::norm_eval(&norm, &d)?;
                    if nd > 1e-12 {
                        worst = worst.max((self.eval(x, v) - self.eval(x, w)).abs() / nd);
                    }
                }
            }
        }
        Ok(worst)
    }
}
