use std::collections::BTreeMap;

use ib_geometry::{
    dist_between_convex, sine_ball, sine_bruteforce, sine_chain, sine_simplex_lb, AffineSubspace,
    ConvexBody, GeomError, NormSpec, Section, DEFAULT_SINE_SAMPLES,
};
use ib_model::{
    lower_prevision, optimal_arm, HypothesisFamily, OutcomeSpace, RewardSpec, Scenario,
};
use ib_numkit::RealMatrix;
use serde::{Deserialize, Serialize};

use crate::{CertError, Result, ZBar};

/// `R = max_θ ‖θ‖_Z̄` over the hypothesis grid.
pub fn param_r(zb: &ZBar) -> Result<f64> {
    let fam = zb.family();
    let mut r = 0.0f64;
    for t in 0..fam.num_hypotheses() {
        r = r.max(zb.norm(&zb.embed_z(fam.theta(t)?))?);
    }
    Ok(r)
}

/// Which sine estimator `param_s` runs on every grid cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SineMethod {
    /// `max_{y in K ∩ Δ} min_{i in E} y_i` with `E` the support of `K ∩ Δ`.
    SimplexLb,
    /// Exact formula for a ball body.
    Ball,
    /// Minimum of per-prefix component sines (scenario metadata `chain_components`).
    Chain,
    /// Sampling; uses the scenario's `sine_chart` when `chart` is set.
    Bruteforce {
        samples: usize,
        seed: u64,
        chart: bool,
    },
    /// Pick from the above by body kind and metadata.
    Auto,
    /// Principal angles between subspaces; there is no body-relative form.
    PrincipalAngles,
}

/// One component of a chain: rows of `F` and the outcome coordinates whose
/// coefficients define the conditional constraint on `Δ_{|cols|}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainComponent {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

/// Affine chart `y = L t + o` with the body expressed in `t` coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SineChart {
    /// `dim_y × k`, row-major.
    pub matrix: Vec<Vec<f64>>,
    pub offset: Vec<f64>,
    pub body: ConvexBody,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SineReport {
    pub value: f64,
    pub method: String,
    /// The cell attaining the minimum.
    pub arm: usize,
    pub theta: usize,
}

fn row(m: &RealMatrix, i: usize) -> Vec<f64> {
    (0..m.ncols()).map(|j| m[(i, j)]).collect()
}

fn rows_of(m: &RealMatrix) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| row(m, i)).collect()
}

fn matrix_key(m: &RealMatrix) -> Vec<i64> {
    m.iter().map(|v| (v * 1e10).round() as i64).collect()
}

/// `K^♭ = {y : F y = 0, μ(y) = 1}`.
fn flat_kernel(f: &RealMatrix, mu: &[f64]) -> Result<AffineSubspace> {
    let mut rows = rows_of(f);
    let mut rhs = vec![0.0; rows.len()];
    rows.push(mu.to_vec());
    rhs.push(1.0);
    Ok(AffineSubspace::from_rows(&rows, &rhs, f.ncols())?)
}

/// Labels where `K ∩ Δ` has some mass.
fn simplex_support(sec: &Section, labels: usize) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for i in 0..labels {
        let mut c = vec![0.0; labels];
        c[i] = -1.0;
        if let Some((v, _)) = sec.linear_min(&c)? {
            if -v > 1e-9 {
                out.push(i);
            }
        }
    }
    Ok(out)
}

fn cell_simplex_lb(
    fam: &HypothesisFamily,
    space: &OutcomeSpace,
    x: usize,
    t: usize,
) -> Result<f64> {
    let labels = match space.body {
        ConvexBody::SimplexOfLabels { labels } => labels,
        _ => {
            return Err(CertError::NoApplicableMethod(
                "simplex_lb needs a simplex body".into(),
            ))
        }
    };
    let u = fam.kernel_subspace(x, t)?;
    let sec = Section::new(space.body.clone(), u.clone());
    let support = simplex_support(&sec, labels)?;
    if support.is_empty() {
        return Err(CertError::Geometry(GeomError::EmptyIntersection));
    }
    Ok(sine_simplex_lb(&u, &support)?)
}

fn cell_ball(fam: &HypothesisFamily, space: &OutcomeSpace, x: usize, t: usize) -> Result<f64> {
    let ConvexBody::Ball {
        center,
        axes,
        radius,
    } = &space.body
    else {
        return Err(CertError::NoApplicableMethod(
            "ball method needs a ball body".into(),
        ));
    };
    // y = c + r E ξ, so F y = 0 reads (r F E) ξ = -F c.
    let f = fam.f_matrix(x, t)?;
    let k = axes.len();
    let e = RealMatrix::from_fn(f.ncols(), k, |i, j| axes[j][i] * radius);
    let fe = &f * e;
    let fc: Vec<f64> = (0..f.nrows())
        .map(|i| -(0..f.ncols()).map(|j| f[(i, j)] * center[j]).sum::<f64>())
        .collect();
    let u = AffineSubspace::from_rows(&rows_of(&fe), &fc, k)?;
    Ok(sine_ball(&u)?)
}

fn cell_chain(
    fam: &HypothesisFamily,
    comps: &[ChainComponent],
    x: usize,
    t: usize,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    let f = fam.f_matrix(x, t)?;
    let mut sines = Vec::new();
    for c in comps {
        if c.rows.is_empty() {
            sines.push(1.0);
            continue;
        }
        let mut rows: Vec<Vec<f64>> = c
            .rows
            .iter()
            .map(|&r| c.cols.iter().map(|&j| f[(r, j)]).collect())
            .collect();
        let mut rhs = vec![0.0; rows.len()];
        rows.push(vec![1.0; c.cols.len()]);
        rhs.push(1.0);
        let u = AffineSubspace::from_rows(&rows, &rhs, c.cols.len())?;
        let body = ConvexBody::simplex(c.cols.len());
        let norm = body.hull_norm()?;
        match sine_bruteforce(&u, &body, &norm, samples, seed) {
            Ok(s) => sines.push(s.min(1.0)),
            // A point inside the simplex: nothing lies outside, the sine is 1.
            Err(GeomError::DegenerateInput(_)) => sines.push(1.0),
            Err(e) => return Err(e.into()),
        }
    }
    Ok(sine_chain(&sines)?)
}

fn cell_bruteforce(
    fam: &HypothesisFamily,
    space: &OutcomeSpace,
    chart: Option<&SineChart>,
    x: usize,
    t: usize,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    let f = fam.f_matrix(x, t)?;
    let res = match chart {
        Some(ch) => {
            let k = ch.body.dim();
            let l = ib_numkit::mat_from_rows(&ch.matrix, k)?;
            let fl = &f * l;
            let rhs: Vec<f64> = (0..f.nrows())
                .map(|i| {
                    -(0..f.ncols())
                        .map(|j| f[(i, j)] * ch.offset[j])
                        .sum::<f64>()
                })
                .collect();
            let u = AffineSubspace::from_rows(&rows_of(&fl), &rhs, k)?;
            sine_bruteforce(&u, &ch.body, &NormSpec::L2, samples, seed)
        }
        None => {
            let u = flat_kernel(&f, &space.mu)?;
            sine_bruteforce(&u, &space.body, &space.y_norm()?, samples, seed)
        }
    };
    match res {
        Ok(s) => Ok(s.min(1.0)),
        Err(GeomError::DegenerateInput(_)) => Ok(1.0),
        Err(e) => Err(e.into()),
    }
}

fn chain_components(sc: &Scenario) -> Option<Vec<ChainComponent>> {
    serde_json::from_value(sc.meta.params.get("chain_components")?.clone()).ok()
}

fn sine_chart(sc: &Scenario) -> Option<SineChart> {
    serde_json::from_value(sc.meta.params.get("sine_chart")?.clone()).ok()
}

/// Resolve `Auto` to a concrete method for this scenario.
pub fn resolve_sine_method(sc: &Scenario, method: &SineMethod) -> SineMethod {
    if *method != SineMethod::Auto {
        return method.clone();
    }
    if chain_components(sc).is_some() {
        SineMethod::Chain
    } else if sine_chart(sc).is_some() {
        SineMethod::Bruteforce {
            samples: DEFAULT_SINE_SAMPLES,
            seed: 0,
            chart: true,
        }
    } else {
        match sc.space.body {
            ConvexBody::SimplexOfLabels { .. } => SineMethod::SimplexLb,
            ConvexBody::Ball { .. } => SineMethod::Ball,
            _ => SineMethod::Bruteforce {
                samples: DEFAULT_SINE_SAMPLES,
                seed: 0,
                chart: false,
            },
        }
    }
}

fn method_name(m: &SineMethod) -> String {
    match m {
        SineMethod::SimplexLb => "simplex_lb".into(),
        SineMethod::Ball => "ball".into(),
        SineMethod::Chain => "chain".into(),
        SineMethod::Bruteforce { samples, chart, .. } => {
            format!(
                "bruteforce({samples}{})",
                if *chart { ", chart" } else { "" }
            )
        }
        SineMethod::Auto => "auto".into(),
        SineMethod::PrincipalAngles => "principal_angles".into(),
    }
}

/// `S = min_{x,θ} sin(K_θ(x)^♭, D)` over the grid with the chosen estimator.
/// Cells with identical `F_{xθ}` are evaluated once.
pub fn param_s(sc: &Scenario, method: &SineMethod) -> Result<SineReport> {
    let m = resolve_sine_method(sc, method);
    let fam = &sc.family;
    let comps = chain_components(sc);
    let chart = sine_chart(sc);
    let mut cache: BTreeMap<Vec<i64>, f64> = BTreeMap::new();
    let mut best = SineReport {
        value: 1.0,
        method: method_name(&m),
        arm: 0,
        theta: 0,
    };
    for x in 0..fam.num_arms() {
        for t in 0..fam.num_hypotheses() {
            let key = matrix_key(&fam.f_matrix(x, t)?);
            let s = match cache.get(&key) {
                Some(&s) => s,
                None => {
                    let s = match &m {
                        SineMethod::SimplexLb => cell_simplex_lb(fam, &sc.space, x, t)?,
                        SineMethod::Ball => cell_ball(fam, &sc.space, x, t)?,
                        SineMethod::Chain => {
                            let comps = comps.as_ref().ok_or_else(|| {
                                CertError::NoApplicableMethod("no chain_components metadata".into())
                            })?;
                            cell_chain(fam, comps, x, t, DEFAULT_SINE_SAMPLES, 0)?
                        }
                        SineMethod::Bruteforce {
                            samples,
                            seed,
                            chart: use_chart,
                        } => {
                            let ch = if *use_chart {
                                Some(chart.as_ref().ok_or_else(|| {
                                    CertError::NoApplicableMethod("no sine_chart metadata".into())
                                })?)
                            } else {
                                None
                            };
                            cell_bruteforce(fam, &sc.space, ch, x, t, *samples, *seed)?
                        }
                        SineMethod::PrincipalAngles => {
                            return Err(CertError::NoApplicableMethod(
                                "principal angles compare two subspaces, not a subspace and a body"
                                    .into(),
                            ))
                        }
                        SineMethod::Auto => unreachable!("resolved above"),
                    };
                    cache.insert(key, s);
                    s
                }
            };
            if s < best.value {
                best = SineReport {
                    value: s,
                    method: best.method.clone(),
                    arm: x,
                    theta: t,
                };
            }
        }
    }
    Ok(best)
}

/// `C = max r - min r` over arms and the body.
pub fn param_c(reward: &RewardSpec, space: &OutcomeSpace) -> Result<f64> {
    let whole = Section::whole(space.body.clone());
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for x in 0..reward.c.len() {
        let neg: Vec<f64> = reward.c[x].iter().map(|v| -v).collect();
        if let (Some((a, _)), Some((b, _))) =
            (whole.linear_min(&reward.c[x])?, whole.linear_min(&neg)?)
        {
            lo = lo.min(a + reward.c0[x]);
            hi = hi.max(-b + reward.c0[x]);
        }
    }
    Ok(if hi >= lo { hi - lo } else { 0.0 })
}

/// The largest `g` such that every ordered pair `(θ, θ')` with
/// `ME_θ'(x*_θ') >= ME_θ(x*_θ)` and `ME_θ(x*_θ') < ME_θ(x*_θ)` has
/// `d(K_θ(x*_θ')⁺, K_θ'(x*_θ')⁺) >= g`. Infinite when no pair qualifies.
pub fn gap_compute(
    fam: &HypothesisFamily,
    reward: &RewardSpec,
    space: &OutcomeSpace,
) -> Result<f64> {
    let norm = space.y_norm()?;
    let n = fam.num_hypotheses();
    let opt: Vec<(usize, f64)> = (0..n)
        .map(|t| optimal_arm(fam, reward, space, t))
        .collect::<std::result::Result<_, _>>()?;
    let tol = |v: f64| 1e-9 * (1.0 + v.abs());
    let mut g = f64::INFINITY;
    for t in 0..n {
        for tp in 0..n {
            if t == tp {
                continue;
            }
            let (xp, mep) = opt[tp];
            let me = opt[t].1;
            if mep < me - tol(me) {
                continue;
            }
            let cross = lower_prevision(fam, reward, space, xp, t)?;
            if cross >= me - tol(me) {
                continue;
            }
            let a = fam.credal_section(space, xp, t)?;
            let b = fam.credal_section(space, xp, tp)?;
            g = g.min(dist_between_convex(&norm, &a, &b)?);
        }
    }
    Ok(g)
}
