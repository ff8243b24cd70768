use std::f64::consts::PI;

use ib_model::{Arm, HypothesisFamily, OutcomeSpace, RewardSpec, Scenario};

use crate::util::{check, finish, known, linspace, meta};
use crate::Result;

/// Outcomes on the triangle; each credal section is the line through the
/// centre at angle `x + θ`, and the reward is the indicator of outcome 2.
///
/// `z = (cos θ, sin θ)`, so `F = cos(x+θ) u·y + sin(x+θ) v·y` with `u, v` an
/// orthonormal basis of the sum-zero plane. The hypothesis grid must be a
/// subgrid of the arm grid and the arm grid must contain the quarter turns,
/// so every θ has an arm whose line is parallel to the side `01`.
pub fn rot_triangle(arm_res: usize, h_res: usize) -> Result<Scenario> {
    check(
        arm_res > 0 && arm_res % 4 == 0,
        "arm_res must be a positive multiple of 4",
    )?;
    check(
        h_res > 0 && arm_res % h_res == 0,
        "h_res must divide arm_res",
    )?;
    let s2 = 2f64.sqrt();
    let s6 = 6f64.sqrt();
    let u = [1.0 / s2, -1.0 / s2, 0.0];
    let v = [1.0 / s6, 1.0 / s6, -2.0 / s6];
    let mut arms = Vec::new();
    let mut tensors = Vec::new();
    for k in 0..arm_res {
        let x = 2.0 * PI * k as f64 / arm_res as f64;
        let (s, c) = x.sin_cos();
        let row0: Vec<f64> = (0..3).map(|j| c * u[j] + s * v[j]).collect();
        let row1: Vec<f64> = (0..3).map(|j| -s * u[j] + c * v[j]).collect();
        arms.push(Arm::new(format!("x{k}"), vec![x]));
        tensors.push(vec![vec![row0, row1]]);
    }
    let hypotheses = (0..h_res)
        .map(|j| {
            let t = 2.0 * PI * j as f64 / h_res as f64;
            vec![t.cos(), t.sin()]
        })
        .collect();
    let family = HypothesisFamily {
        arms,
        dim_z: 2,
        dim_w: 1,
        hypotheses,
        tensors,
    };
    let mut m = meta(&[("arm_res", arm_res as f64), ("h_res", h_res as f64)]);
    m.known_values.push(known(
        "optimal_value",
        1.0 / 3.0,
        1e-6,
        "line parallel to the side 01 through the centre",
    ));
    finish(Scenario {
        name: "rot_triangle".into(),
        space: OutcomeSpace::simplex(3),
        family,
        reward: RewardSpec::uniform(arm_res, vec![0.0, 0.0, 1.0], 0.0),
        meta: m,
    })
}

/// The eight isometries of the unit square as affine maps `(p, q) ->
/// (p^x, q^x)`, each coordinate a covector on `(p, q, 1)`.
fn square_group() -> Vec<(&'static str, [f64; 3], [f64; 3])> {
    vec![
        ("id", [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]),
        ("flip_p", [-1.0, 0.0, 1.0], [0.0, 1.0, 0.0]),
        ("flip_q", [1.0, 0.0, 0.0], [0.0, -1.0, 1.0]),
        ("rot180", [-1.0, 0.0, 1.0], [0.0, -1.0, 1.0]),
        ("diag", [0.0, 1.0, 0.0], [1.0, 0.0, 0.0]),
        ("rot90", [0.0, -1.0, 1.0], [1.0, 0.0, 0.0]),
        ("rot270", [0.0, 1.0, 0.0], [-1.0, 0.0, 1.0]),
        ("antidiag", [0.0, -1.0, 1.0], [-1.0, 0.0, 1.0]),
    ]
}

/// Four outcomes with `P{0,1} = p^x / 2` and `P(2 | {2,3}) = q^x`, where
/// `(p^x, q^x)` is the image of `θ = (p, q)` under the isometry `x`.
/// Hypotheses use `z = (p, q, 1)`; the reward pays 1 on outcomes 0 and 2.
pub fn square_isometries(h_res: usize) -> Result<Scenario> {
    check(h_res >= 2, "h_res >= 2")?;
    let group = square_group();
    let mut arms = Vec::new();
    let mut tensors = Vec::new();
    for (k, (name, pa, qa)) in group.iter().enumerate() {
        // row 0: z2 (y0 + y1) - (pa·z)/2 (y0 + y1 + y2 + y3)
        // row 1: z2 y2 - (qa·z)(y2 + y3)
        let mut r0 = vec![vec![0.0; 4]; 3];
        let mut r1 = vec![vec![0.0; 4]; 3];
        r0[2][0] += 1.0;
        r0[2][1] += 1.0;
        r1[2][2] += 1.0;
        for i in 0..3 {
            for j in 0..4 {
                r0[i][j] -= 0.5 * pa[i];
            }
            r1[i][2] -= qa[i];
            r1[i][3] -= qa[i];
        }
        arms.push(Arm::new(*name, vec![k as f64]));
        tensors.push(vec![r0, r1]);
    }
    let grid = linspace(0.0, 1.0, h_res);
    let mut hypotheses = Vec::new();
    for &p in &grid {
        for &q in &grid {
            hypotheses.push(vec![p, q, 1.0]);
        }
    }
    let family = HypothesisFamily {
        arms,
        dim_z: 3,
        dim_w: 2,
        hypotheses,
        tensors,
    };
    let mut m = meta(&[("h_res", h_res as f64)]);
    m.known_values
        .push(known("arms", 8.0, 0.0, "symmetry group of the square"));
    m.known_values
        .push(known("D_W", 2.0, 0.0, "two scalar constraints per cell"));
    m.notes.push(
        "reward choice (outcomes 0 and 2 pay 1) is a free parameter of the construction".into(),
    );
    finish(Scenario {
        name: "square_isometries".into(),
        space: OutcomeSpace::simplex(4),
        family,
        reward: RewardSpec::uniform(8, vec![1.0, 0.0, 1.0, 0.0], 0.0),
        meta: m,
    })
}
