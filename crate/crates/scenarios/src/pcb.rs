use ib_certificates::ChainComponent;
use ib_model::{Arm, HypothesisFamily, OutcomeSpace, RewardSpec, Scenario};
use serde::{Deserialize, Serialize};

use crate::util::{check, finish, known, meta};
use crate::Result;

/// One stochastic prefix `a`: the conditional law of the next element is
/// `f_a(x, z_a) / ψ_a(z_a)` where `z_a` is this prefix's block of `z`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PcbPrefix {
    pub prefix: Vec<usize>,
    /// `ψ_a` as a covector on the block.
    pub psi: Vec<f64>,
    /// `f[x][c][i]`: coefficient of `z_a[i]` in `f_a(x, z_a)_c`.
    pub f: Vec<Vec<Vec<f64>>>,
}

/// A partial conditional bandit: outcomes are sequences in `G_0 × ... ×
/// G_{n-1}` (mixed radix, row major) and only the prefixes listed have a
/// known conditional law. Hypotheses are full `z` vectors, the prefix
/// blocks concatenated in listing order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PcbSpec {
    pub sets: Vec<usize>,
    pub prefixes: Vec<PcbPrefix>,
    pub arms: Vec<Arm>,
    /// Reward covector per arm, or a single one shared by all arms.
    pub reward: Vec<Vec<f64>>,
    pub hypotheses: Vec<Vec<f64>>,
}

fn decode(mut idx: usize, sets: &[usize]) -> Vec<usize> {
    let mut out = vec![0; sets.len()];
    for k in (0..sets.len()).rev() {
        out[k] = idx % sets[k];
        idx /= sets[k];
    }
    out
}

fn encode(seq: &[usize], sets: &[usize]) -> usize {
    seq.iter().zip(sets).fold(0, |acc, (s, g)| acc * g + s)
}

/// Build the scenario with `F_{ac} = ψ_a(z_a) Σ_e y_{ace} - f_a(x, z_a)_c
/// Σ y_{a·}` for every listed prefix `a` and every `c` but the last.
/// The per-prefix blocks are recorded as `chain_components` metadata.
pub fn pcb_scenario(name: &str, spec: &PcbSpec) -> Result<Scenario> {
    let n = spec.sets.len();
    check(
        n >= 1 && spec.sets.iter().all(|&g| g >= 1),
        "sets must be nonempty",
    )?;
    let na = spec.arms.len();
    check(na >= 1, "need at least one arm")?;
    let nout: usize = spec.sets.iter().product();
    let mut offsets = Vec::new();
    let mut dz = 0;
    for p in &spec.prefixes {
        check(
            p.prefix.len() < n,
            "prefix must be shorter than the sequence",
        )?;
        check(
            p.prefix.iter().zip(&spec.sets).all(|(a, g)| a < g),
            "prefix out of range",
        )?;
        let g = spec.sets[p.prefix.len()];
        check(p.f.len() == na, "f needs one entry per arm")?;
        check(
            p.f.iter()
                .all(|fx| fx.len() == g && fx.iter().all(|r| r.len() == p.psi.len())),
            "f entries must be |G_k| × dim z_a",
        )?;
        offsets.push(dz);
        dz += p.psi.len();
    }
    check(
        spec.hypotheses.iter().all(|h| h.len() == dz),
        "hypotheses must have the concatenated block length",
    )?;
    check(
        spec.reward.len() == 1 || spec.reward.len() == na,
        "reward needs one covector or one per arm",
    )?;
    check(
        spec.reward.iter().all(|c| c.len() == nout),
        "reward covectors need one entry per outcome",
    )?;

    let outcomes: Vec<Vec<usize>> = (0..nout).map(|i| decode(i, &spec.sets)).collect();
    let mut tensors = vec![Vec::new(); na];
    let mut comps = Vec::new();
    for (p, &off) in spec.prefixes.iter().zip(&offsets) {
        let k = p.prefix.len();
        let g = spec.sets[k];
        let first_row = tensors[0].len();
        for c in 0..g.saturating_sub(1) {
            for (x, t) in tensors.iter_mut().enumerate() {
                let mut tw = vec![vec![0.0; nout]; dz];
                for (j, o) in outcomes.iter().enumerate() {
                    if o[..k] != p.prefix[..] {
                        continue;
                    }
                    for i in 0..p.psi.len() {
                        let hit = if o[k] == c { p.psi[i] } else { 0.0 };
                        tw[off + i][j] = hit - p.f[x][c][i];
                    }
                }
                t.push(tw);
            }
        }
        let rows: Vec<usize> = (first_row..first_row + g.saturating_sub(1)).collect();
        let cols = (0..g)
            .map(|c| {
                let mut seq = p.prefix.clone();
                seq.push(c);
                seq.resize(n, 0);
                encode(&seq, &spec.sets)
            })
            .collect();
        comps.push(ChainComponent { rows, cols });
    }
    let dw = tensors[0].len();
    let family = HypothesisFamily {
        arms: spec.arms.clone(),
        dim_z: dz,
        dim_w: dw,
        hypotheses: spec.hypotheses.clone(),
        tensors,
    };
    let reward = if spec.reward.len() == 1 {
        RewardSpec::uniform(na, spec.reward[0].clone(), 0.0)
    } else {
        RewardSpec {
            c: spec.reward.clone(),
            c0: vec![0.0; na],
        }
    };
    let mut md = meta(&[
        ("sequence_length", n as f64),
        ("outcomes", nout as f64),
        ("prefixes", spec.prefixes.len() as f64),
    ]);
    md.params
        .insert("sets".into(), serde_json::json!(spec.sets));
    md.params
        .insert("chain_components".into(), serde_json::to_value(&comps)?);
    md.known_values.push(known(
        "D_Z",
        dz as f64,
        0.0,
        "sum of the prefix block dimensions",
    ));
    md.known_values.push(known(
        "D_W",
        dw as f64,
        0.0,
        "one row per stochastic prefix and non-final symbol",
    ));
    finish(Scenario {
        name: name.into(),
        space: OutcomeSpace::simplex(nout),
        family,
        reward,
        meta: md,
    })
}

fn stochastic(m: [[f64; 2]; 2]) -> Vec<Vec<f64>> {
    m.iter().map(|r| r.to_vec()).collect()
}

/// Two binary steps; the first is always stochastic and the second only
/// after symbol 0. Each arm applies its own column-stochastic matrix to
/// the hypothesis block `(p, 1 - p)` resp. `(q, 1 - q)`, with `p, q` on
/// `{0.2, 0.5, 0.8}`.
pub fn pcb_desk() -> Result<Scenario> {
    let id = [[1.0, 0.0], [0.0, 1.0]];
    let swap = [[0.0, 1.0], [1.0, 0.0]];
    let a = [[0.8, 0.3], [0.2, 0.7]];
    let b = [[0.6, 0.1], [0.4, 0.9]];
    let pairs = [(id, id), (swap, id), (id, swap), (a, b)];
    let levels = [0.2, 0.5, 0.8];
    let mut hypotheses = Vec::new();
    for &p in &levels {
        for &q in &levels {
            hypotheses.push(vec![p, 1.0 - p, q, 1.0 - q]);
        }
    }
    let spec = PcbSpec {
        sets: vec![2, 2],
        prefixes: vec![
            PcbPrefix {
                prefix: vec![],
                psi: vec![1.0, 1.0],
                f: pairs.iter().map(|(m, _)| stochastic(*m)).collect(),
            },
            PcbPrefix {
                prefix: vec![0],
                psi: vec![1.0, 1.0],
                f: pairs.iter().map(|(_, m)| stochastic(*m)).collect(),
            },
        ],
        arms: (0..pairs.len())
            .map(|k| Arm::new(format!("desk{k}"), vec![k as f64]))
            .collect(),
        reward: vec![vec![1.0, 0.0, 0.3, 0.6]],
        hypotheses,
    };
    let mut sc = pcb_scenario("pcb_desk", &spec)?;
    sc.meta.known_values.push(known(
        "R_upper",
        8.0,
        1e-6,
        "4n for sequences of length n = 2",
    ));
    sc.meta.known_values.push(known(
        "S",
        1.0,
        1e-9,
        "chain of full-support binary conditionals",
    ));
    Ok(sc)
}

fn zs_index(b: usize, a: usize, s: usize, na: usize) -> usize {
    (b * na + a) * 2 + s
}

/// Maximin over the strategy grid against pure replies: `(value, argmax)`.
fn grid_maximin(p: &[Vec<f64>], x_grid: &[Vec<f64>]) -> (f64, usize) {
    let nb = p[0].len();
    let mut best = (f64::NEG_INFINITY, 0);
    for (k, x) in x_grid.iter().enumerate() {
        let v = (0..nb)
            .map(|b| {
                x.iter()
                    .enumerate()
                    .map(|(a, xa)| xa * p[a][b])
                    .sum::<f64>()
            })
            .fold(f64::INFINITY, f64::min);
        if v > best.0 {
            best = (v, k);
        }
    }
    best
}

fn grid_reply(p: &[Vec<f64>], x: &[f64]) -> f64 {
    (0..p[0].len())
        .map(|b| {
            x.iter()
                .enumerate()
                .map(|(a, xa)| xa * p[a][b])
                .sum::<f64>()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Zero-sum matrix game with bandit feedback. Payoffs `P[a][b] in [-1, 1]`
/// (rows: our actions, columns: the opponent's). The opponent picks `b`
/// freely, our action `a` is drawn from the arm's mixed strategy, and the
/// reported sign `s` is `+1` with probability `(1 + P_ab) / 2`.
pub fn zerosum_scenario(payoffs: &[Vec<Vec<f64>>], x_grid: &[Vec<f64>]) -> Result<Scenario> {
    check(
        !payoffs.is_empty() && !x_grid.is_empty(),
        "need payoff matrices and strategies",
    )?;
    let na = payoffs[0].len();
    check(na >= 1 && !payoffs[0][0].is_empty(), "empty payoff matrix")?;
    let nb = payoffs[0][0].len();
    check(
        payoffs.iter().all(|p| {
            p.len() == na
                && p.iter()
                    .all(|r| r.len() == nb && r.iter().all(|v| v.abs() <= 1.0))
        }),
        "payoff matrices must share a shape and lie in [-1, 1]",
    )?;
    check(
        x_grid.iter().all(|x| {
            x.len() == na
                && x.iter().all(|v| *v >= 0.0)
                && (x.iter().sum::<f64>() - 1.0).abs() < 1e-9
        }),
        "strategies must be distributions over our actions",
    )?;
    let mut prefixes = Vec::new();
    for b in 0..nb {
        let f = x_grid
            .iter()
            .map(|x| x.iter().map(|xa| vec![*xa]).collect())
            .collect();
        prefixes.push(PcbPrefix {
            prefix: vec![b],
            psi: vec![1.0],
            f,
        });
    }
    for b in 0..nb {
        for a in 0..na {
            let f = vec![vec![vec![1.0, 0.0], vec![0.0, 1.0]]; x_grid.len()];
            prefixes.push(PcbPrefix {
                prefix: vec![b, a],
                psi: vec![1.0, 1.0],
                f,
            });
        }
    }
    let hypotheses = payoffs
        .iter()
        .map(|p| {
            let mut z = vec![1.0; nb];
            for b in 0..nb {
                for a in 0..na {
                    z.push((1.0 - p[a][b]) / 2.0);
                    z.push((1.0 + p[a][b]) / 2.0);
                }
            }
            z
        })
        .collect();
    let mut r = vec![0.0; nb * na * 2];
    for b in 0..nb {
        for a in 0..na {
            r[zs_index(b, a, 0, na)] = -1.0;
            r[zs_index(b, a, 1, na)] = 1.0;
        }
    }
    let spec = PcbSpec {
        sets: vec![nb, na, 2],
        prefixes,
        arms: x_grid
            .iter()
            .enumerate()
            .map(|(k, x)| Arm::new(format!("x{k}"), x.clone()))
            .collect(),
        reward: vec![r],
        hypotheses,
    };
    let mut sc = pcb_scenario("zerosum", &spec)?;
    sc.meta
        .params
        .insert("payoffs".into(), serde_json::json!(payoffs));
    sc.meta
        .params
        .insert("x_grid".into(), serde_json::json!(x_grid));
    sc.meta.known_values.push(known(
        "R_upper",
        12.0,
        1e-6,
        "zero-sum instance of the conditional bandit",
    ));
    sc.meta
        .known_values
        .push(known("S", 1.0, 1e-9, "chain of point conditionals"));
    sc.meta
        .known_values
        .push(known("C_upper", 2.0, 1e-9, "reward is a sign"));
    if let Some(g) = zerosum_gap_lower_bound(payoffs, x_grid).filter(|g| g.is_finite()) {
        sc.meta.known_values.push(known(
            "gap_lower",
            g,
            1e-9,
            "half the smallest per-reply expected payoff difference",
        ));
    }
    for (t, p) in payoffs.iter().enumerate() {
        sc.meta.known_values.push(known(
            &format!("value_{t}"),
            grid_maximin(p, x_grid).0,
            1e-9,
            "maximin over the strategy grid",
        ));
    }
    Ok(sc)
}

/// `g̃ = min ½ min_b E_{a~x*_{P'}} |P_ab - P'_ab|` over ordered pairs where
/// `P'` has at least the value of `P` and `x*_{P'}` is suboptimal for `P`.
/// Values and maximisers are taken over `x_grid`. `None` if the inputs are
/// malformed; infinite if no pair qualifies.
pub fn zerosum_gap_lower_bound(payoffs: &[Vec<Vec<f64>>], x_grid: &[Vec<f64>]) -> Option<f64> {
    let nb = payoffs.first()?.first()?.len();
    let opt: Vec<(f64, usize)> = payoffs.iter().map(|p| grid_maximin(p, x_grid)).collect();
    let tol = 1e-12;
    let mut g = f64::INFINITY;
    for (i, p) in payoffs.iter().enumerate() {
        for (j, q) in payoffs.iter().enumerate() {
            if i == j || opt[j].0 < opt[i].0 - tol {
                continue;
            }
            let x = &x_grid[opt[j].1];
            if grid_reply(p, x) >= opt[i].0 - tol {
                continue;
            }
            let d = (0..nb)
                .map(|b| {
                    x.iter()
                        .enumerate()
                        .map(|(a, xa)| xa * (p[a][b] - q[a][b]).abs())
                        .sum::<f64>()
                })
                .fold(f64::INFINITY, f64::min);
            g = g.min(0.5 * d);
        }
    }
    Some(g)
}
