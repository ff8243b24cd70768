use std::collections::BTreeMap;

use ib_model::{KnownValue, Meta, Scenario};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{Result, ScenarioError};

pub(crate) fn known(quantity: &str, value: f64, tolerance: f64, provenance: &str) -> KnownValue {
    KnownValue {
        quantity: quantity.into(),
        value,
        tolerance,
        provenance: provenance.into(),
    }
}

pub(crate) fn meta(grid: &[(&str, f64)]) -> Meta {
    Meta {
        grid: grid
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect::<BTreeMap<_, _>>(),
        ..Meta::default()
    }
}

/// Validate and return; builders never hand out an invalid scenario.
pub(crate) fn finish(sc: Scenario) -> Result<Scenario> {
    sc.ensure_valid()?;
    Ok(sc)
}

pub(crate) fn check(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(ScenarioError::InvalidParameter(msg.into()))
    }
}

/// `k` evenly spaced points of `[lo, hi]` (the midpoint when `k == 1`).
pub(crate) fn linspace(lo: f64, hi: f64, k: usize) -> Vec<f64> {
    if k == 1 {
        return vec![(lo + hi) / 2.0];
    }
    (0..k)
        .map(|i| lo + (hi - lo) * i as f64 / (k - 1) as f64)
        .collect()
}

/// Unit vectors in `R^dim`: the `±e_i` followed by `extra` seeded random
/// directions.
pub fn unit_grid(dim: usize, extra: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for i in 0..dim {
        for s in [1.0, -1.0] {
            let mut e = vec![0.0; dim];
            e[i] = s;
            out.push(e);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.len() < 2 * dim + extra {
        let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (0.1..=1.0).contains(&n) {
            out.push(v.iter().map(|x| x / n).collect());
        }
    }
    out
}
