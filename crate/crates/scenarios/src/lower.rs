use ib_certificates::SineChart;
use ib_geometry::ConvexBody;
use ib_model::{Arm, HypothesisFamily, OutcomeSpace, RewardSpec, Scenario};

use crate::util::{check, finish, known, linspace, meta, unit_grid};
use crate::Result;

fn basis(dim: usize, i: usize) -> Vec<f64> {
    let mut e = vec![0.0; dim];
    e[i] = 1.0;
    e
}

/// Sine of the cone construction: `2α / √(1 + 4α²)`.
pub fn lower_s_sine_closed_form(alpha: f64) -> f64 {
    2.0 * alpha / (1.0 + 4.0 * alpha * alpha).sqrt()
}

/// The small-sine instance. `Y = Z = R^{D+2}`, `μ = y0 + y1`, and the body
/// is the cone over the `D`-ball `{y1 = 1 - y0, ‖y_{2..}‖ <= y1}` with apex
/// `e0`. Hypotheses are `(1 - α, -α, 2αu)` for unit `u` from
/// [`unit_grid`]`(D, h_extra, seed)`; arms are those directions and their
/// negatives, and the reward is `x·y_{2..}`. `F(x, z, y) = z·y` does not depend on the arm.
pub fn lower_s_scenario(d: usize, alpha: f64, h_extra: usize, seed: u64) -> Result<Scenario> {
    check(d >= 4, "D >= 4")?;
    check(alpha > 0.0 && alpha <= 0.25, "alpha must lie in (0, 1/4]")?;
    let dy = d + 2;
    let dirs = unit_grid(d, h_extra, seed);
    let arm_dirs: Vec<Vec<f64>> = dirs
        .iter()
        .cloned()
        .chain(dirs[2 * d..].iter().map(|u| u.iter().map(|v| -v).collect()))
        .collect();
    let mut mu = vec![0.0; dy];
    mu[0] = 1.0;
    mu[1] = 1.0;
    let body = ConvexBody::ConeBall {
        apex: basis(dy, 0),
        base_center: basis(dy, 1),
        axes: (2..dy).map(|i| basis(dy, i)).collect(),
        radius: 1.0,
    };
    let identity: Vec<Vec<f64>> = (0..dy).map(|i| basis(dy, i)).collect();
    let hypotheses: Vec<Vec<f64>> = dirs
        .iter()
        .map(|u| {
            [1.0 - alpha, -alpha]
                .into_iter()
                .chain(u.iter().map(|v| 2.0 * alpha * v))
                .collect()
        })
        .collect();
    let family = HypothesisFamily {
        arms: arm_dirs
            .iter()
            .enumerate()
            .map(|(k, u)| Arm::new(format!("x{k}"), u.clone()))
            .collect(),
        dim_z: dy,
        dim_w: 1,
        hypotheses,
        tensors: vec![vec![identity]; arm_dirs.len()],
    };
    let reward = RewardSpec {
        c: arm_dirs
            .iter()
            .map(|u| [0.0, 0.0].into_iter().chain(u.iter().cloned()).collect())
            .collect(),
        c0: vec![0.0; arm_dirs.len()],
    };

    // chart t -> (t0, 1 - t0, t1, ..., tD) of the flat slice
    let k = d + 1;
    let mut matrix = vec![vec![0.0; k]; dy];
    matrix[0][0] = 1.0;
    matrix[1][0] = -1.0;
    for i in 1..k {
        matrix[i + 1][i] = 1.0;
    }
    let chart = SineChart {
        matrix,
        offset: basis(dy, 1),
        body: ConvexBody::ConeBall {
            apex: basis(k, 0),
            base_center: vec![0.0; k],
            axes: (1..k).map(|i| basis(k, i)).collect(),
            radius: 1.0,
        },
    };

    let mut md = meta(&[
        ("D", d as f64),
        ("alpha", alpha),
        ("h_extra", h_extra as f64),
        ("seed", seed as f64),
    ]);
    md.params.insert("alpha".into(), serde_json::json!(alpha));
    md.params.insert("D".into(), serde_json::json!(d));
    md.params
        .insert("sine_chart".into(), serde_json::to_value(&chart)?);
    md.known_values
        .push(known("R", 1.0, 1e-3, "lower-bound construction parameters"));
    md.known_values.push(known(
        "S",
        lower_s_sine_closed_form(alpha),
        5e-2,
        "cone slope against the hypothesis plane",
    ));
    md.known_values
        .push(known("C", 2.0, 1e-9, "reward x·y ranges over [-1, 1]"));
    md.known_values.push(known(
        "w_unit_norm",
        1.0 / (1.0 - alpha),
        1e-9,
        "minimum-norm preimage of 1",
    ));
    md.known_values.push(known(
        "optimal_value",
        -0.5,
        1e-9,
        "arm -u against hypothesis u",
    ));
    finish(Scenario {
        name: "lower_s".into(),
        space: OutcomeSpace::new(mu, body),
        family,
        reward,
        meta: md,
    })
}

/// The large-`R` instance. Outcomes are the unit disk at height 1
/// (`μ = y2`); arms are unit `x = (cos φ, sin φ)` with `φ in [α, π - α]`,
/// hypotheses unit `θ = (cos ψ, sin ψ)` with `|ψ| <= π/2 - α`, and the
/// credal section is the chord `θᵀ(I + λxxᵀ)(y0, y1) = 0`. Reward is `-y0`.
/// Grids are uniform in angle and must have odd size so that `φ = π/2` and
/// `ψ = 0` are present.
pub fn lower_r_scenario(lambda: f64, alpha: f64, arm_res: usize, h_res: usize) -> Result<Scenario> {
    use std::f64::consts::{FRAC_PI_2, PI};
    check(lambda > 0.0, "lambda > 0")?;
    check(
        alpha > 3.0 * PI / 8.0 && alpha < FRAC_PI_2,
        "alpha must lie in (3π/8, π/2)",
    )?;
    check(arm_res % 2 == 1 && h_res % 2 == 1, "grid sizes must be odd")?;
    let phis = linspace(alpha, PI - alpha, arm_res);
    let psis = linspace(-(FRAC_PI_2 - alpha), FRAC_PI_2 - alpha, h_res);
    let mut arms = Vec::new();
    let mut tensors = Vec::new();
    for &phi in &phis {
        let x = [phi.cos(), phi.sin()];
        let t: Vec<Vec<f64>> = (0..2)
            .map(|i| {
                let mut row: Vec<f64> = (0..2)
                    .map(|j| lambda * x[i] * x[j] + if i == j { 1.0 } else { 0.0 })
                    .collect();
                row.push(0.0);
                row
            })
            .collect();
        arms.push(Arm::new(format!("phi={phi:.6}"), x.to_vec()));
        tensors.push(vec![t]);
    }
    let hypotheses = psis.iter().map(|p| vec![p.cos(), p.sin()]).collect();
    let na = arms.len();
    let family = HypothesisFamily {
        arms,
        dim_z: 2,
        dim_w: 1,
        hypotheses,
        tensors,
    };
    let space = OutcomeSpace::new(
        vec![0.0, 0.0, 1.0],
        ConvexBody::Ball {
            center: vec![0.0, 0.0, 1.0],
            axes: vec![basis(3, 0), basis(3, 1)],
            radius: 1.0,
        },
    );
    let mut md = meta(&[
        ("lambda", lambda),
        ("alpha", alpha),
        ("arm_res", arm_res as f64),
        ("h_res", h_res as f64),
    ]);
    md.params.insert("lambda".into(), serde_json::json!(lambda));
    md.params.insert("alpha".into(), serde_json::json!(alpha));
    md.known_values.push(known(
        "S",
        1.0,
        1e-6,
        "chords of a disk meet it at full sine",
    ));
    md.known_values.push(known(
        "R_upper",
        lambda + 1.0,
        1e-6,
        "norm of I + λxxᵀ on unit vectors",
    ));
    md.known_values
        .push(known("C", 2.0, 1e-9, "reward -y0 ranges over [-1, 1]"));
    finish(Scenario {
        name: "lower_r".into(),
        space,
        family,
        reward: RewardSpec::uniform(na, vec![-1.0, 0.0, 0.0], 0.0),
        meta: md,
    })
}
