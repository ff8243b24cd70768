use ib_numkit::{LinExpr, LpBuilder, Sense};
use serde::{Deserialize, Serialize};

use crate::{GeomError, Result};

/// A norm on a coordinate space.
///
/// `PolytopeHull` is the gauge of the absolute convex hull of its vertices.
/// Block norms apply a sub-norm to a subset of coordinates and combine the
/// block values by max or by sum; their index sets must partition the
/// coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NormSpec {
    L1,
    L2,
    LInf,
    MaxOfBlocks { blocks: Vec<NormBlock> },
    SumOfBlocks { blocks: Vec<NormBlock> },
    PolytopeHull { vertices: Vec<Vec<f64>> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormBlock {
    pub indices: Vec<usize>,
    pub norm: NormSpec,
}

impl NormBlock {
    pub fn new(indices: Vec<usize>, norm: NormSpec) -> Self {
        NormBlock { indices, norm }
    }
}

fn gather(v: &[f64], idx: &[usize]) -> Vec<f64> {
    idx.iter().map(|&i| v[i]).collect()
}

impl NormSpec {
    /// True when the unit ball is a polytope, i.e. epigraphs are LP-representable.
    pub fn is_polyhedral(&self) -> bool {
        match self {
            NormSpec::L2 => false,
            NormSpec::MaxOfBlocks { blocks } | NormSpec::SumOfBlocks { blocks } => {
                blocks.iter().all(|b| b.norm.is_polyhedral())
            }
            _ => true,
        }
    }

    /// Check that the norm applies to vectors of length `dim`.
    pub fn check_dim(&self, dim: usize) -> Result<()> {
        match self {
            NormSpec::L1 | NormSpec::L2 | NormSpec::LInf => Ok(()),
            NormSpec::PolytopeHull { vertices } => {
                if vertices.is_empty() {
                    return Err(GeomError::InvalidNorm("empty vertex list".into()));
                }
                if vertices.iter().any(|v| v.len() != dim) {
                    return Err(GeomError::DimensionMismatch(format!(
                        "hull vertices vs vector length {dim}"
                    )));
                }
                Ok(())
            }
            NormSpec::MaxOfBlocks { blocks } | NormSpec::SumOfBlocks { blocks } => {
                let mut seen = vec![false; dim];
                for b in blocks {
                    for &i in &b.indices {
                        if i >= dim || seen[i] {
                            return Err(GeomError::InvalidNorm(format!(
                                "block index {i} out of range or repeated"
                            )));
                        }
                        seen[i] = true;
                    }
                    b.norm.check_dim(b.indices.len())?;
                }
                if seen.iter().any(|s| !s) {
                    return Err(GeomError::InvalidNorm(
                        "blocks do not cover every coordinate".into(),
                    ));
                }
                Ok(())
            }
        }
    }
}

/// Evaluate `‖v‖`.
pub fn norm_eval(n: &NormSpec, v: &[f64]) -> Result<f64> {
    n.check_dim(v.len())?;
    eval_unchecked(n, v)
}

fn eval_unchecked(n: &NormSpec, v: &[f64]) -> Result<f64> {
    Ok(match n {
        NormSpec::L1 => v.iter().map(|x| x.abs()).sum(),
        NormSpec::L2 => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
        NormSpec::LInf => v.iter().fold(0.0, |a, x| a.max(x.abs())),
        NormSpec::MaxOfBlocks { blocks } => {
            let mut m = 0.0f64;
            for b in blocks {
                m = m.max(eval_unchecked(&b.norm, &gather(v, &b.indices))?);
            }
            m
        }
        NormSpec::SumOfBlocks { blocks } => {
            let mut s = 0.0;
            for b in blocks {
                s += eval_unchecked(&b.norm, &gather(v, &b.indices))?;
            }
            s
        }
        NormSpec::PolytopeHull { vertices } => hull_gauge(vertices, v)?,
    })
}

// min sum|c_k| s.t. sum c_k V_k = v
fn hull_gauge(vertices: &[Vec<f64>], v: &[f64]) -> Result<f64> {
    if v.iter().all(|x| *x == 0.0) {
        return Ok(0.0);
    }
    let mut b = LpBuilder::new();
    let p = b.nonnegs(vertices.len());
    let q = b.nonnegs(vertices.len());
    for k in 0..vertices.len() {
        b.objective(p[k], 1.0).objective(q[k], 1.0);
    }
    for (i, &vi) in v.iter().enumerate() {
        let mut e = LinExpr::constant(-vi);
        for (k, vert) in vertices.iter().enumerate() {
            e.add_term(p[k], vert[i]).add_term(q[k], -vert[i]);
        }
        b.eq_zero(e);
    }
    let s = b.solve(Sense::Minimize)?;
    if !s.is_optimal() {
        return Err(GeomError::InvalidNorm(
            "hull vertices do not span the vector".into(),
        ));
    }
    Ok(s.value)
}

/// A subgradient `g` of the norm at `v`: `g·v = ‖v‖` and the dual norm of
/// `g` is at most one.
pub fn norm_subgradient(n: &NormSpec, v: &[f64]) -> Result<Vec<f64>> {
    n.check_dim(v.len())?;
    subgrad_unchecked(n, v)
}

fn subgrad_unchecked(n: &NormSpec, v: &[f64]) -> Result<Vec<f64>> {
    let d = v.len();
    Ok(match n {
        NormSpec::L1 => v
            .iter()
            .map(|x| {
                if *x > 0.0 {
                    1.0
                } else if *x < 0.0 {
                    -1.0
                } else {
                    0.0
                }
            })
            .collect(),
        NormSpec::L2 => {
            let s = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if s == 0.0 {
                vec![0.0; d]
            } else {
                v.iter().map(|x| x / s).collect()
            }
        }
        NormSpec::LInf => {
            let mut g = vec![0.0; d];
            if let Some((k, x)) = v
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            {
                if *x != 0.0 {
                    g[k] = x.signum();
                }
            }
            g
        }
        NormSpec::MaxOfBlocks { blocks } => {
            let mut best = (f64::NEG_INFINITY, 0);
            for (k, b) in blocks.iter().enumerate() {
                let val = eval_unchecked(&b.norm, &gather(v, &b.indices))?;
                if val > best.0 {
                    best = (val, k);
                }
            }
            let mut g = vec![0.0; d];
            if let Some(b) = blocks.get(best.1) {
                let gb = subgrad_unchecked(&b.norm, &gather(v, &b.indices))?;
                for (j, &i) in b.indices.iter().enumerate() {
                    g[i] = gb[j];
                }
            }
            g
        }
        NormSpec::SumOfBlocks { blocks } => {
            let mut g = vec![0.0; d];
            for b in blocks {
                let gb = subgrad_unchecked(&b.norm, &gather(v, &b.indices))?;
                for (j, &i) in b.indices.iter().enumerate() {
                    g[i] = gb[j];
                }
            }
            g
        }
        NormSpec::PolytopeHull { vertices } => {
            // max λ·v s.t. |λ·V_k| <= 1
            let mut b = LpBuilder::new();
            let lam = b.frees(d);
            for (i, &l) in lam.iter().enumerate() {
                b.objective(l, v[i]);
            }
            for vert in vertices {
                let mut e = LinExpr::constant(-1.0);
                let mut f = LinExpr::constant(-1.0);
                for (i, &l) in lam.iter().enumerate() {
                    e.add_term(l, vert[i]);
                    f.add_term(l, -vert[i]);
                }
                b.le_zero(e).le_zero(f);
            }
            let s = b.solve(Sense::Maximize)?;
            if !s.is_optimal() {
                return Err(GeomError::InvalidNorm(
                    "hull vertices do not span the space".into(),
                ));
            }
            s.point
        }
    })
}

/// Add the constraint `‖y‖ <= t` to an LP, where `y` are linear
/// expressions and `t` a variable. Only valid for polyhedral norms.
pub fn add_norm_epigraph(b: &mut LpBuilder, n: &NormSpec, y: &[LinExpr], t: usize) -> Result<()> {
    match n {
        NormSpec::L1 => {
            let mut sum = LinExpr::default();
            for yi in y {
                let a = b.nonneg();
                let mut up = yi.clone();
                up.add_term(a, -1.0);
                let mut dn = LinExpr::default();
                dn.add_scaled(yi, -1.0).add_term(a, -1.0);
                b.le_zero(up).le_zero(dn);
                sum.add_term(a, 1.0);
            }
            sum.add_term(t, -1.0);
            b.le_zero(sum);
        }
        NormSpec::LInf => {
            for yi in y {
                let mut up = yi.clone();
                up.add_term(t, -1.0);
                let mut dn = LinExpr::default();
                dn.add_scaled(yi, -1.0).add_term(t, -1.0);
                b.le_zero(up).le_zero(dn);
            }
        }
        NormSpec::PolytopeHull { vertices } => {
            let p = b.nonnegs(vertices.len());
            let q = b.nonnegs(vertices.len());
            for (i, yi) in y.iter().enumerate() {
                let mut e = yi.clone();
                for (k, vert) in vertices.iter().enumerate() {
                    e.add_term(p[k], -vert[i]).add_term(q[k], vert[i]);
                }
                b.eq_zero(e);
            }
            let mut sum = LinExpr::var(t);
            sum.terms[0].1 = -1.0;
            for k in 0..vertices.len() {
                sum.add_term(p[k], 1.0).add_term(q[k], 1.0);
            }
            b.le_zero(sum);
        }
        NormSpec::MaxOfBlocks { blocks } => {
            for blk in blocks {
                let ys: Vec<LinExpr> = blk.indices.iter().map(|&i| y[i].clone()).collect();
                add_norm_epigraph(b, &blk.norm, &ys, t)?;
            }
        }
        NormSpec::SumOfBlocks { blocks } => {
            let mut sum = LinExpr::default();
            for blk in blocks {
                let tk = b.nonneg();
                let ys: Vec<LinExpr> = blk.indices.iter().map(|&i| y[i].clone()).collect();
                add_norm_epigraph(b, &blk.norm, &ys, tk)?;
                sum.add_term(tk, 1.0);
            }
            sum.add_term(t, -1.0);
            b.le_zero(sum);
        }
        NormSpec::L2 => return Err(GeomError::InvalidNorm("L2 has no finite epigraph".into())),
    }
    Ok(())
}

/// Minimise `‖y‖` where `y` is a vector of affine expressions in the
/// variables created by `setup`. Polyhedral norms give one exact LP; other
/// norms use Kelley's cutting-plane method on the epigraph, which converges
/// quickly in the low dimensions used here.
///
/// Returns the optimal value and the LP point (all variables; `y` can be
/// evaluated from it).
pub fn minimize_norm<F>(n: &NormSpec, setup: F) -> Result<(f64, Vec<f64>, Vec<LinExpr>)>
where
    F: Fn(&mut LpBuilder) -> Vec<LinExpr>,
{
    if n.is_polyhedral() {
        let mut b = LpBuilder::new();
        let y = setup(&mut b);
        n.check_dim(y.len())?;
        let t = b.nonneg();
        b.objective(t, 1.0);
        add_norm_epigraph(&mut b, n, &y, t)?;
        let s = b.solve(Sense::Minimize)?;
        if !s.is_optimal() {
            return Err(GeomError::EmptySubspace);
        }
        return Ok((s.value, s.point, y));
    }
    let mut cuts: Vec<Vec<f64>> = Vec::new();
    let mut probe = LpBuilder::new();
    let dim = setup(&mut probe).len();
    n.check_dim(dim)?;
    for i in 0..dim {
        for s in [1.0, -1.0] {
            let mut e = vec![0.0; dim];
            e[i] = s;
            cuts.push(subgrad_unchecked(n, &e)?);
        }
    }
    let mut best: Option<(f64, Vec<f64>, Vec<LinExpr>)> = None;
    for _ in 0..500 {
        let mut b = LpBuilder::new();
        let y = setup(&mut b);
        let t = b.nonneg();
        b.objective(t, 1.0);
        for g in &cuts {
            let mut e = LinExpr::default();
            for (yi, gi) in y.iter().zip(g) {
                e.add_scaled(yi, *gi);
            }
            e.add_term(t, -1.0);
            b.le_zero(e);
        }
        let s = b.solve(Sense::Minimize)?;
        if !s.is_optimal() {
            return Err(GeomError::EmptySubspace);
        }
        let lb = s.value;
        let yv: Vec<f64> = y.iter().map(|e| e.eval(&s.point)).collect();
        let ub = eval_unchecked(n, &yv)?;
        if best.as_ref().is_none_or(|b| ub < b.0) {
            best = Some((ub, s.point.clone(), y.clone()));
        }
        let bv = best.as_ref().map(|b| b.0).unwrap_or(ub);
        if bv - lb <= 1e-10 * bv.max(1.0) {
            break;
        }
        cuts.push(subgrad_unchecked(n, &yv)?);
    }
    best.ok_or(GeomError::EmptySubspace)
}
