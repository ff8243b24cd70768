use ib_geometry::{dist_point_to_affine, AffineSubspace};
use ib_model::Scenario;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{derive_seed, NatureSpec, Result, SimError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationResult {
    pub tau: usize,
    pub delta: f64,
    pub reps: usize,
    pub violations: usize,
    /// Fraction of reps with `d_Y(ȳ, K_θ*(x)^♭) >= δ`.
    pub rate: f64,
    pub std_error: f64,
    /// `(2e|B|/(D_W+1))^{D_W+1} exp(-τδ²/2)`; only for simplex bodies.
    pub simplex_bound: Option<f64>,
    /// `2 D_W exp(-c τ δ² / D_W^{5/3})` with the free constant `c = c_exp`.
    pub generic_bound: f64,
}

/// `d_Y(y, K_θ(x)^♭)` where `K^♭ = {y : F_{xθ} y = 0, μ(y) = 1}`, in the
/// norm whose unit ball is the absolute convex hull of the body.
pub fn flat_distance(sc: &Scenario, theta: usize, x: usize, y: &[f64]) -> Result<f64> {
    let f = sc.family.f_matrix(x, theta)?;
    let mut rows: Vec<Vec<f64>> = (0..f.nrows())
        .map(|i| (0..f.ncols()).map(|j| f[(i, j)]).collect())
        .collect();
    let mut rhs = vec![0.0; rows.len()];
    rows.push(sc.space.mu.clone());
    rhs.push(1.0);
    let flat = AffineSubspace::from_rows(&rows, &rhs, sc.space.dim)?;
    Ok(dist_point_to_affine(&sc.space.y_norm()?, y, &flat)?)
}

/// Pull arm `x` `tau` times against `nature` and record how often the mean
/// outcome lands at least `delta` away from the flat of `θ*`.
#[allow(clippy::too_many_arguments)]
pub fn concentration_experiment(
    sc: &Scenario,
    theta: usize,
    nature: &NatureSpec,
    x: usize,
    tau: usize,
    delta: f64,
    reps: usize,
    seed: u64,
    c_exp: f64,
) -> Result<ConcentrationResult> {
    if reps == 0 || tau == 0 {
        return Err(SimError::InvalidParameter(
            "tau and reps must be positive".into(),
        ));
    }
    if x >= sc.family.num_arms() {
        return Err(SimError::InvalidParameter(format!(
            "arm {x} is not on the grid"
        )));
    }
    let hits: Vec<bool> = (0..reps as u64)
        .into_par_iter()
        .map(|r| {
            let mut nat = nature.make()?;
            nat.reset(sc, theta, derive_seed(seed.wrapping_add(r), 1))?;
            let mut sum = vec![0.0; sc.space.dim];
            for _ in 0..tau {
                for (s, v) in sum.iter_mut().zip(nat.respond(x)?) {
                    *s += v;
                }
            }
            let ybar: Vec<f64> = sum.iter().map(|s| s / tau as f64).collect();
            Ok(flat_distance(sc, theta, x, &ybar)? >= delta)
        })
        .collect::<Result<_>>()?;
    let violations = hits.iter().filter(|h| **h).count();
    let rate = violations as f64 / reps as f64;
    let dw = sc.family.dim_w as f64;
    let t = tau as f64;
    let simplex_bound = sc.space.is_simplex().then(|| {
        let k = dw + 1.0;
        (2.0 * std::f64::consts::E * sc.space.dim as f64 / k).powf(k)
            * (-0.5 * t * delta * delta).exp()
    });
    Ok(ConcentrationResult {
        tau,
        delta,
        reps,
        violations,
        rate,
        std_error: (rate * (1.0 - rate) / reps as f64).sqrt(),
        simplex_bound,
        generic_bound: 2.0 * dw * (-c_exp * t * delta * delta / dw.powf(5.0 / 3.0)).exp(),
    })
}
