use std::f64::consts::PI;

use ib_geometry::ConvexBody;
use ib_model::{Arm, HypothesisFamily, OutcomeSpace, RewardSpec, Scenario};

use crate::util::{check, finish, known, meta};
use crate::Result;

/// Best mean minus the best mean strictly below it.
pub fn classical_gap(means: &[f64]) -> Option<f64> {
    let best = means.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let next = means
        .iter()
        .cloned()
        .filter(|m| *m < best - 1e-12)
        .fold(f64::NEG_INFINITY, f64::max);
    next.is_finite().then(|| best - next)
}

/// `K` arms with Bernoulli rewards of the given means. Outcomes are
/// `Δ{0, 1}` (label 1 is a unit reward) and each credal section is the single
/// distribution with the arm's mean. `z = (m_0, ..., m_{K-1}, 1)`.
pub fn finite_stochastic(means: &[f64]) -> Result<Scenario> {
    check(!means.is_empty(), "need at least one arm")?;
    check(
        means.iter().all(|m| (0.0..=1.0).contains(m)),
        "means must lie in [0, 1]",
    )?;
    let k = means.len();
    let tensors = (0..k)
        .map(|a| {
            // z_K y1 - z_a (y0 + y1)
            let mut t = vec![vec![0.0; 2]; k + 1];
            t[a] = vec![-1.0, -1.0];
            t[k][1] = 1.0;
            vec![t]
        })
        .collect();
    let mut theta = means.to_vec();
    theta.push(1.0);
    let family = HypothesisFamily {
        arms: (0..k)
            .map(|a| Arm::new(format!("arm{a}"), vec![a as f64]))
            .collect(),
        dim_z: k + 1,
        dim_w: 1,
        hypotheses: vec![theta],
        tensors,
    };
    let mut m = meta(&[("arms", k as f64)]);
    let best = means.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    m.known_values
        .push(known("optimal_value", best, 1e-9, "largest mean"));
    if let Some(g) = classical_gap(means) {
        m.known_values.push(known(
            "classical_gap",
            g,
            1e-12,
            "best mean minus next-best mean",
        ));
    }
    m.params.insert("means".into(), serde_json::json!(means));
    finish(Scenario {
        name: "finite_stochastic".into(),
        space: OutcomeSpace::simplex(2),
        family,
        reward: RewardSpec::uniform(k, vec![0.0, 1.0], 0.0),
        meta: m,
    })
}

/// Stochastic linear bandit: outcomes `(1, t)` with `t in [-1, 1]`, reward
/// `t`, and `E t = x·θ`. Uses `z = (θ, 1)` so that `F(x, z, y) =
/// (x·z_{<D}) y0 - z_D y1` is bilinear.
pub fn linear_bandit(arms: &[Vec<f64>], thetas: &[Vec<f64>]) -> Result<Scenario> {
    check(
        !arms.is_empty() && !thetas.is_empty(),
        "need arms and hypotheses",
    )?;
    let d = arms[0].len();
    check(
        arms.iter().all(|a| a.len() == d) && thetas.iter().all(|t| t.len() == d),
        "inconsistent dimensions",
    )?;
    for x in arms {
        for t in thetas {
            let v: f64 = x.iter().zip(t).map(|(a, b)| a * b).sum();
            check(
                v.abs() <= 1.0 + 1e-12,
                "x·θ must lie in [-1, 1] on the grid",
            )?;
        }
    }
    let tensors = arms
        .iter()
        .map(|x| {
            let mut t = vec![vec![0.0; 2]; d + 1];
            for i in 0..d {
                t[i][0] = x[i];
            }
            t[d][1] = -1.0;
            vec![t]
        })
        .collect();
    let family = HypothesisFamily {
        arms: arms
            .iter()
            .enumerate()
            .map(|(i, x)| Arm::new(format!("x{i}"), x.clone()))
            .collect(),
        dim_z: d + 1,
        dim_w: 1,
        hypotheses: thetas
            .iter()
            .map(|t| t.iter().cloned().chain([1.0]).collect())
            .collect(),
        tensors,
    };
    let space = OutcomeSpace::new(
        vec![1.0, 0.0],
        ConvexBody::Segment {
            a: vec![1.0, -1.0],
            b: vec![1.0, 1.0],
        },
    );
    let mut m = meta(&[
        ("arms", arms.len() as f64),
        ("hypotheses", thetas.len() as f64),
    ]);
    m.known_values
        .push(known("D_W", 1.0, 0.0, "one scalar constraint per cell"));
    m.known_values.push(known(
        "S",
        1.0,
        1e-9,
        "K-flat is a single point when the outcome space is a segment",
    ));
    m.notes
        .push("z carries a homogeneous coordinate, so dim Z = D + 1".into());
    finish(Scenario {
        name: "linear_bandit".into(),
        space,
        family,
        reward: RewardSpec::uniform(arms.len(), vec![0.0, 1.0], 0.0),
        meta: m,
    })
}

fn torus(n: usize, res: usize) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for p in &out {
            for k in 0..res {
                let a = 2.0 * PI * k as f64 / res as f64;
                let mut q = p.clone();
                q.push(a.cos());
                q.push(a.sin());
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// Linear bandit on the torus `{x in R^{2n} : x_{2i}² + x_{2i+1}² = 1}`
/// with hypotheses on the scaled torus `A / n`. Both resolutions must be
/// multiples of 4, which puts `θ = x/n` and some `θ ⟂ x` on the grid.
pub fn dhk_torus(n: usize, arm_res: usize, h_res: usize) -> Result<Scenario> {
    check(n >= 1, "n >= 1")?;
    check(
        arm_res % 4 == 0 && h_res % 4 == 0 && arm_res > 0 && h_res > 0,
        "resolutions must be positive multiples of 4",
    )?;
    let arms = torus(n, arm_res);
    let thetas: Vec<Vec<f64>> = torus(n, h_res)
        .into_iter()
        .map(|t| t.iter().map(|v| v / n as f64).collect())
        .collect();
    let mut sc = linear_bandit(&arms, &thetas)?;
    sc.name = "dhk_torus".into();
    sc.meta.grid.insert("n".into(), n as f64);
    sc.meta.grid.insert("arm_res".into(), arm_res as f64);
    sc.meta.grid.insert("h_res".into(), h_res as f64);
    sc.meta.known_values.push(known(
        "R",
        2.0,
        1e-3,
        "max(|x·θ| + 1), attained at θ = x/n; ‖1‖_W = 1 from a cell with x ⟂ θ",
    ));
    sc.meta
        .known_values
        .push(known("C", 2.0, 1e-9, "reward t ranges over [-1, 1]"));
    Ok(sc)
}
