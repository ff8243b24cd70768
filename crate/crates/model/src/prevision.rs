use crate::{HypothesisFamily, ModelError, OutcomeSpace, Result, RewardSpec};

fn extreme_value(
    fam: &HypothesisFamily,
    reward: &RewardSpec,
    space: &OutcomeSpace,
    x: usize,
    theta: usize,
    sign: f64,
) -> Result<f64> {
    let sec = fam.credal_section(space, x, theta)?;
    let c: Vec<f64> = reward
        .c
        .get(x)
        .ok_or(ModelError::IndexOutOfGrid(x))?
        .iter()
        .map(|v| sign * v)
        .collect();
    match sec.linear_min(&c)? {
        Some((v, _)) => Ok(sign * v + reward.c0[x]),
        None => Err(ModelError::InfeasibleCredalSet { arm: x, theta }),
    }
}

/// Minimal expected reward of arm `x` over the credal section of `θ`.
pub fn lower_prevision(
    fam: &HypothesisFamily,
    reward: &RewardSpec,
    space: &OutcomeSpace,
    x: usize,
    theta: usize,
) -> Result<f64> {
    extreme_value(fam, reward, space, x, theta, 1.0)
}

/// Maximal expected reward of arm `x` over the credal section of `θ`.
pub fn upper_prevision(
    fam: &HypothesisFamily,
    reward: &RewardSpec,
    space: &OutcomeSpace,
    x: usize,
    theta: usize,
) -> Result<f64> {
    extreme_value(fam, reward, space, x, theta, -1.0)
}

/// The point of the credal section attaining the lower prevision.
pub fn worst_outcome(
    fam: &HypothesisFamily,
    reward: &RewardSpec,
    space: &OutcomeSpace,
    x: usize,
    theta: usize,
) -> Result<Vec<f64>> {
    let sec = fam.credal_section(space, x, theta)?;
    match sec.linear_min(&reward.c[x])? {
        Some((_, y)) => Ok(y),
        None => Err(ModelError::InfeasibleCredalSet { arm: x, theta }),
    }
}

/// The arm maximising the lower prevision under `θ`; ties go to the lowest
/// arm index, using a relative tolerance so that LP noise does not decide.
pub fn optimal_arm(
    fam: &HypothesisFamily,
    reward: &RewardSpec,
    space: &OutcomeSpace,
    theta: usize,
) -> Result<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for x in 0..fam.num_arms() {
        let v = lower_prevision(fam, reward, space, x, theta)?;
        if best.is_none_or(|(_, bv)| v > bv + 1e-9 * (1.0 + bv.abs())) {
            best = Some((x, v));
        }
    }
    best.ok_or_else(|| ModelError::InvalidScenario("empty arm grid".into()))
}
