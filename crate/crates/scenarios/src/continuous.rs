use ib_geometry::ConvexBody;
use ib_model::{Arm, HypothesisFamily, OutcomeSpace, RewardSpec, Scenario};
use ib_numkit::RealMatrix;

use crate::util::{check, finish, known, linspace, meta};
use crate::Result;

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Outcomes are the unit ball of `R^m` lifted to height 1 (`μ = y_m`); arm
/// `X` is an `n × (m+1)` matrix and hypothesis `θ in R^n` constrains the
/// outcome to the hyperplane `θᵀ X (y, 1) = 0`. Reward is the first
/// coordinate. Every cell must meet the ball, which is checked here.
pub fn hyperplane_scenario(arms: &[Vec<Vec<f64>>], thetas: &[Vec<f64>]) -> Result<Scenario> {
    check(
        !arms.is_empty() && !thetas.is_empty(),
        "need arms and hypotheses",
    )?;
    let n = arms[0].len();
    check(n >= 2, "n >= 2")?;
    let cols = arms[0][0].len();
    check(cols >= 2, "m >= 1")?;
    let m = cols - 1;
    check(
        arms.iter()
            .all(|x| x.len() == n && x.iter().all(|r| r.len() == cols)),
        "arm matrices must be n × (m+1)",
    )?;
    check(
        thetas.iter().all(|t| t.len() == n && norm2(t) > 0.0),
        "hypotheses must be nonzero vectors of length n",
    )?;
    for x in arms {
        let xm = RealMatrix::from_fn(n, cols, |i, j| x[i][j]);
        check(
            ib_numkit::rank(&xm) == n.min(cols),
            "arm matrices must have full rank",
        )?;
        for t in thetas {
            let v: Vec<f64> = (0..cols)
                .map(|j| (0..n).map(|i| t[i] * x[i][j]).sum())
                .collect();
            check(
                v[m].abs() <= norm2(&v[..m]) + 1e-12,
                "hyperplane misses the outcome ball",
            )?;
        }
    }
    let mut center = vec![0.0; cols];
    center[m] = 1.0;
    let axes = (0..m)
        .map(|i| {
            let mut e = vec![0.0; cols];
            e[i] = 1.0;
            e
        })
        .collect();
    let space = OutcomeSpace::new(
        center.clone(),
        ConvexBody::Ball {
            center,
            axes,
            radius: 1.0,
        },
    );
    let family = HypothesisFamily {
        arms: arms
            .iter()
            .enumerate()
            .map(|(k, x)| Arm::new(format!("X{k}"), x.concat()))
            .collect(),
        dim_z: n,
        dim_w: 1,
        hypotheses: thetas.to_vec(),
        tensors: arms.iter().map(|x| vec![x.clone()]).collect(),
    };
    let mut c = vec![0.0; cols];
    c[0] = 1.0;
    let mut md = meta(&[
        ("n", n as f64),
        ("m", m as f64),
        ("arms", arms.len() as f64),
        ("hypotheses", thetas.len() as f64),
    ]);
    md.known_values
        .push(known("D_W", 1.0, 0.0, "one scalar constraint per cell"));
    if let Some(b) = hyperplane_r_bound(arms, thetas) {
        md.known_values.push(known(
            "R_upper",
            b,
            0.0,
            "condition-number bound for invertible arm operators",
        ));
    }
    md.notes
        .push("reward is the first outcome coordinate".into());
    finish(Scenario {
        name: "hyperplane".into(),
        space,
        family,
        reward: RewardSpec::uniform(arms.len(), c, 0.0),
        meta: md,
    })
}

/// Upper bound on `R` from the norms of the arm operators `A_x z = Xᵀz`
/// (as functionals on the outcome space) and of their inverses, with the
/// Euclidean norm on hypotheses. Needs square arm matrices (`n = m + 1`).
///
/// `‖A_x‖` is exact for `m = 1`; otherwise the triangle inequality gives
/// `σ_max(X_{<m}) + ‖X_m‖`, which keeps the result an upper bound.
pub fn hyperplane_r_bound(arms: &[Vec<Vec<f64>>], thetas: &[Vec<f64>]) -> Option<f64> {
    let n = arms.first()?.len();
    let cols = arms[0].first()?.len();
    if n != cols || n < 2 {
        return None;
    }
    let m = n - 1;
    let mut a_max = 0.0f64;
    let mut inv_max = 0.0f64;
    for x in arms {
        let xm = RealMatrix::from_fn(n, n, |i, j| x[i][j]);
        let col = |j: usize| -> Vec<f64> { (0..n).map(|i| x[i][j]).collect() };
        let a_norm = if m == 1 {
            let (c0, c1) = (col(0), col(1));
            let p: Vec<f64> = c0.iter().zip(&c1).map(|(a, b)| a + b).collect();
            let q: Vec<f64> = c0.iter().zip(&c1).map(|(a, b)| a - b).collect();
            norm2(&p).max(norm2(&q))
        } else {
            let head = xm.columns(0, m).into_owned();
            head.singular_values().max() + norm2(&col(m))
        };
        let inv_t = xm.try_inverse()?.transpose();
        let head = inv_t.columns(0, m).into_owned();
        let last: Vec<f64> = inv_t.column(m).iter().cloned().collect();
        let inv_norm = head.singular_values().max().max(norm2(&last));
        a_max = a_max.max(a_norm);
        inv_max = inv_max.max(inv_norm);
    }
    let norms: Vec<f64> = thetas.iter().map(|t| norm2(t)).collect();
    let hi = norms.iter().cloned().fold(0.0, f64::max);
    let lo = norms.iter().cloned().fold(f64::INFINITY, f64::min);
    Some(hi / lo * a_max * inv_max)
}

/// Bandit whose only feedback is a reward `r in [-1, 1]`, embedded as the
/// moment vector `(1, r, ..., r^n)`. The hull of the moment curve is
/// replaced by the polytope on `curve_samples` evenly spaced curve points.
/// Two arms; hypotheses fix the mean reward of each arm on a `3 × 3` grid
/// of `{-1/2, 0, 1/2}`, with `z = (m_0, m_1, 1)`.
pub fn moment_scenario(n: usize, curve_samples: usize) -> Result<Scenario> {
    check(n >= 1, "n >= 1")?;
    check(
        curve_samples >= n + 1 && curve_samples >= 2,
        "need at least n + 1 curve samples",
    )?;
    let ts = linspace(-1.0, 1.0, curve_samples);
    let vertices: Vec<Vec<f64>> = ts
        .iter()
        .map(|t| (0..=n).map(|k| t.powi(k as i32)).collect())
        .collect();
    let mut mu = vec![0.0; n + 1];
    mu[0] = 1.0;
    let space = OutcomeSpace::new(mu, ConvexBody::Polytope { vertices });
    let k = 2;
    let tensors = (0..k)
        .map(|a| {
            // z_K y1 - z_a y0
            let mut t = vec![vec![0.0; n + 1]; k + 1];
            t[a][0] = -1.0;
            t[k][1] = 1.0;
            vec![t]
        })
        .collect();
    let levels = [-0.5, 0.0, 0.5];
    let mut hypotheses = Vec::new();
    for &a in &levels {
        for &b in &levels {
            hypotheses.push(vec![a, b, 1.0]);
        }
    }
    let family = HypothesisFamily {
        arms: (0..k)
            .map(|a| Arm::new(format!("arm{a}"), vec![a as f64]))
            .collect(),
        dim_z: k + 1,
        dim_w: 1,
        hypotheses,
        tensors,
    };
    let mut c = vec![0.0; n + 1];
    c[1] = 1.0;
    let mut md = meta(&[("n", n as f64), ("curve_samples", curve_samples as f64)]);
    md.notes.push(format!(
        "moment curve hull approximated by {curve_samples} sampled vertices"
    ));
    finish(Scenario {
        name: "moment".into(),
        space,
        family,
        reward: RewardSpec::uniform(k, c, 0.0),
        meta: md,
    })
}

/// Two traffic lights on roads AB, AC crossing DE. Arms are light durations
/// `(Bg, Br, Cg, Cr)` on a `grid^4` lattice of `[tau_min, tau_max]`;
/// outcomes are normalised trip counts `(y_AB, y_AC, y_DE, 1)` in the unit
/// box; hypotheses `(θ_DE, θ_A)` on a `grid × grid` lattice of `[0, 1]` fix
/// `E y_DE` and `E (y_AB + y_AC)`. Reward is minus the mean red-light wait.
pub fn traffic_abcde(tau_min: f64, tau_max: f64, grid: usize) -> Result<Scenario> {
    check(0.0 < tau_min && tau_min < tau_max, "0 < tau_min < tau_max")?;
    check(grid >= 1, "grid >= 1")?;
    let taus = linspace(tau_min, tau_max, grid);
    let mut vertices = Vec::new();
    for a in [0.0, 1.0] {
        for b in [0.0, 1.0] {
            for c in [0.0, 1.0] {
                vertices.push(vec![a, b, c, 1.0]);
            }
        }
    }
    let space = OutcomeSpace::new(vec![0.0, 0.0, 0.0, 1.0], ConvexBody::Polytope { vertices });
    // z = (θ_DE, θ_A, 1); rows z2 y2 - z0 y3 and z2 (y0 + y1) - z1 y3
    let mut t0 = vec![vec![0.0; 4]; 3];
    t0[2][2] = 1.0;
    t0[0][3] = -1.0;
    let mut t1 = vec![vec![0.0; 4]; 3];
    t1[2][0] = 1.0;
    t1[2][1] = 1.0;
    t1[1][3] = -1.0;
    let mut arms = Vec::new();
    let mut cs = Vec::new();
    for &bg in &taus {
        for &br in &taus {
            for &cg in &taus {
                for &cr in &taus {
                    let x = vec![bg, br, cg, cr];
                    cs.push(traffic_reward_covector(&x));
                    arms.push(Arm::new(format!("{bg}/{br}/{cg}/{cr}"), x));
                }
            }
        }
    }
    let hgrid = if grid == 1 {
        vec![0.5]
    } else {
        linspace(0.0, 1.0, grid)
    };
    let mut hypotheses = Vec::new();
    for &de in &hgrid {
        for &a in &hgrid {
            hypotheses.push(vec![de, a, 1.0]);
        }
    }
    let na = arms.len();
    let family = HypothesisFamily {
        arms,
        dim_z: 3,
        dim_w: 2,
        hypotheses,
        tensors: vec![vec![t0, t1]; na],
    };
    let mut md = meta(&[
        ("tau_min", tau_min),
        ("tau_max", tau_max),
        ("grid", grid as f64),
    ]);
    md.known_values
        .push(known("D_W", 2.0, 0.0, "two expectation constraints"));
    finish(Scenario {
        name: "traffic_abcde".into(),
        space,
        family,
        reward: RewardSpec {
            c: cs,
            c0: vec![0.0; na],
        },
        meta: md,
    })
}

/// Covector of the waiting-time reward in `(y_AB, y_AC, y_DE, 1)`.
pub(crate) fn traffic_reward_covector(x: &[f64]) -> Vec<f64> {
    let (bg, br, cg, cr) = (x[0], x[1], x[2], x[3]);
    vec![
        -0.5 * br * br / (bg + br),
        -0.5 * cr * cr / (cg + cr),
        -0.5 * (bg * bg / (bg + br) + cg * cg / (cg + cr)),
        0.0,
    ]
}
