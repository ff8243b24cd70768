use std::collections::BTreeSet;

use ib_geometry::Section;
use ib_model::{HypothesisFamily, OutcomeSpace};
use ib_numkit::{solve_square, LinExpr, LpBuilder, RealMatrix, RealVector, Sense};
use serde::{Deserialize, Serialize};

use crate::{CertError, Result};

/// Vertex systems per cell above which the dual ball is not enumerated.
const MAX_SYSTEMS: usize = 200_000;
/// Boundary samples standing in for the vertices of a round body.
const ROUND_GRID: usize = 256;

/// The norm `‖w‖ = max_{x,θ} min {‖y‖ : F_{xθ} y = w}` on `W`.
///
/// For a fixed cell the inner minimum is the gauge of `F_{xθ}(absconv D)`,
/// whose polar is `{λ : |λ·F_{xθ} v| <= 1 for every extreme v}`. The norm
/// is then the support function of the union of these polars.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WNorm {
    /// `dim W = 1`: `‖w‖ = scale · |w|`.
    Scalar { scale: f64 },
    /// Vertices of the dual unit ball, one representative per `±` pair.
    Dual {
        dim: usize,
        vertices: Vec<Vec<f64>>,
        approximate: bool,
    },
    /// Per-cell constraint rows `F_{xθ} v_j`; evaluated by one LP per cell.
    Cells {
        dim: usize,
        rows: Vec<Vec<Vec<f64>>>,
        approximate: bool,
    },
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn matvec(m: &RealMatrix, v: &[f64]) -> Vec<f64> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)] * v[j]).sum())
        .collect()
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut r: usize = 1;
    for i in 0..k {
        r = r.saturating_mul(n - i) / (i + 1);
    }
    r
}

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order.
fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Vertices of `{λ : |a_j·λ| <= 1}` with the first nonzero entry positive.
fn dual_vertices(rows: &[Vec<f64>], dim: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for_each_subset(rows.len(), dim, |s| {
        let a = RealMatrix::from_fn(dim, dim, |i, j| rows[s[i]][j]);
        if a.clone().try_inverse().is_none() {
            return;
        }
        for signs in 0..(1usize << (dim - 1)) {
            let rhs = RealVector::from_fn(dim, |i, _| {
                if i > 0 && signs >> (i - 1) & 1 == 1 {
                    -1.0
                } else {
                    1.0
                }
            });
            let Some(lam) = solve_square(&a, &rhs) else {
                continue;
            };
            let lam = lam.as_slice().to_vec();
            if rows.iter().all(|r| dot(r, &lam).abs() <= 1.0 + 1e-9) {
                out.push(lam);
            }
        }
    });
    out
}

fn canonical_key(v: &[f64]) -> (Vec<f64>, Vec<i64>) {
    let s = v
        .iter()
        .find(|x| x.abs() > 1e-12)
        .map_or(1.0, |x| x.signum());
    let c: Vec<f64> = v.iter().map(|x| x * s).collect();
    let key = c.iter().map(|x| (x * 1e9).round() as i64).collect();
    (c, key)
}

fn cell_max_lp(rows: &[Vec<f64>], dim: usize, w: &[f64]) -> (f64, Vec<f64>) {
    let mut lp = LpBuilder::new();
    let lam = lp.frees(dim);
    for (i, &l) in lam.iter().enumerate() {
        lp.objective(l, w[i]);
    }
    for r in rows {
        let mut e = LinExpr::constant(-1.0);
        for (i, &l) in lam.iter().enumerate() {
            e.add_term(l, r[i]);
        }
        lp.le_zero(e.clone());
        let mut e2 = LinExpr::constant(-1.0);
        for (i, &l) in lam.iter().enumerate() {
            e2.add_term(l, -r[i]);
        }
        lp.le_zero(e2);
    }
    match lp.solve(Sense::Maximize) {
        Ok(s) if s.is_optimal() => (s.value, lam.iter().map(|&i| s.point[i]).collect()),
        _ => (0.0, vec![0.0; dim]),
    }
}

impl WNorm {
    pub fn build(fam: &HypothesisFamily, space: &OutcomeSpace) -> Result<Self> {
        let dim = fam.dim_w;
        let whole = Section::whole(space.body.clone());
        if dim == 1 {
            let mut scale = 0.0f64;
            for x in 0..fam.num_arms() {
                for t in 0..fam.num_hypotheses() {
                    let f = fam.f_matrix(x, t)?;
                    let row: Vec<f64> = (0..f.ncols()).map(|j| f[(0, j)]).collect();
                    let m = whole.abs_max(&row)?.unwrap_or(0.0);
                    if m <= 1e-12 {
                        return Err(CertError::InfeasiblePreimage { arm: x, theta: t });
                    }
                    scale = scale.max(1.0 / m);
                }
            }
            return Ok(WNorm::Scalar { scale });
        }
        let (verts, approximate) = match space.body.vertices() {
            Some(v) => (v, false),
            None => (space.body.extreme_points(ROUND_GRID), true),
        };
        let mut cells = Vec::new();
        for x in 0..fam.num_arms() {
            for t in 0..fam.num_hypotheses() {
                let f = fam.f_matrix(x, t)?;
                if ib_numkit::rank(&f) < dim {
                    return Err(CertError::InfeasiblePreimage { arm: x, theta: t });
                }
                cells.push(verts.iter().map(|v| matvec(&f, v)).collect::<Vec<_>>());
            }
        }
        if dim == 0 {
            return Ok(WNorm::Dual {
                dim,
                vertices: Vec::new(),
                approximate,
            });
        }
        let systems = binom(verts.len(), dim).saturating_mul(1 << (dim - 1));
        if systems > MAX_SYSTEMS {
            return Ok(WNorm::Cells {
                dim,
                rows: cells,
                approximate,
            });
        }
        let mut seen = BTreeSet::new();
        let mut vertices = Vec::new();
        for rows in &cells {
            for v in dual_vertices(rows, dim) {
                let (c, key) = canonical_key(&v);
                if seen.insert(key) {
                    vertices.push(c);
                }
            }
        }
        Ok(WNorm::Dual {
            dim,
            vertices: prune(vertices),
            approximate,
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            WNorm::Scalar { .. } => 1,
            WNorm::Dual { dim, .. } | WNorm::Cells { dim, .. } => *dim,
        }
    }

    /// True when a round body was replaced by boundary samples.
    pub fn is_approximate(&self) -> bool {
        match self {
            WNorm::Scalar { .. } => false,
            WNorm::Dual { approximate, .. } | WNorm::Cells { approximate, .. } => *approximate,
        }
    }

    pub fn eval(&self, w: &[f64]) -> f64 {
        self.eval_arg(w).0
    }

    /// The norm together with a dual vector `λ` attaining it (`λ·w = ‖w‖`).
    pub fn eval_arg(&self, w: &[f64]) -> (f64, Vec<f64>) {
        match self {
            WNorm::Scalar { scale } => {
                let s = if w[0] < 0.0 { -scale } else { *scale };
                (scale * w[0].abs(), vec![s])
            }
            WNorm::Dual { dim, vertices, .. } => {
                let mut best = (0.0, vec![0.0; *dim]);
                for v in vertices {
                    let d = dot(v, w);
                    if d.abs() > best.0 {
                        let s = d.signum();
                        best = (d.abs(), v.iter().map(|x| x * s).collect());
                    }
                }
                best
            }
            WNorm::Cells { dim, rows, .. } => {
                let mut best = (0.0, vec![0.0; *dim]);
                for r in rows {
                    let c = cell_max_lp(r, *dim, w);
                    if c.0 > best.0 {
                        best = c;
                    }
                }
                best
            }
        }
    }
}

/// Drop dual vertices that lie in the convex hull of the others (and their
/// negatives); they never attain the maximum.
fn prune(vs: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    if vs.len() <= 2 || vs.len() > 400 {
        return vs;
    }
    let mut keep = vec![true; vs.len()];
    for i in 0..vs.len() {
        let others: Vec<usize> = (0..vs.len()).filter(|&j| j != i && keep[j]).collect();
        let mut lp = LpBuilder::new();
        let cp = lp.nonnegs(others.len());
        let cm = lp.nonnegs(others.len());
        let mut sum = LinExpr::constant(-1.0);
        for k in 0..others.len() {
            sum.add_term(cp[k], 1.0).add_term(cm[k], 1.0);
        }
        lp.le_zero(sum);
        for d in 0..vs[i].len() {
            let mut e = LinExpr::constant(-vs[i][d]);
            for (k, &j) in others.iter().enumerate() {
                e.add_term(cp[k], vs[j][d]).add_term(cm[k], -vs[j][d]);
            }
            lp.eq_zero(e);
        }
        if let Ok(s) = lp.solve(Sense::Minimize) {
            if s.is_optimal() {
                keep[i] = false;
            }
        }
    }
    vs.into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(v, _)| v)
        .collect()
}

/// Helper for tests and reports: the W-norm of `w` computed cell by cell
/// through the primal definition, as a minimum-norm preimage LP.
pub fn w_norm_primal(fam: &HypothesisFamily, space: &OutcomeSpace, w: &[f64]) -> Result<f64> {
    let norm = space.y_norm()?;
    let mut best = 0.0f64;
    for x in 0..fam.num_arms() {
        for t in 0..fam.num_hypotheses() {
            let f = fam.f_matrix(x, t)?;
            let rows: Vec<Vec<f64>> = (0..f.nrows())
                .map(|i| (0..f.ncols()).map(|j| f[(i, j)]).collect())
                .collect();
            let s = ib_geometry::AffineSubspace::from_rows(&rows, w, f.ncols())
                .map_err(|_| CertError::InfeasiblePreimage { arm: x, theta: t })?;
            let (_, v) = ib_geometry::min_norm_on_affine(&norm, &s)?;
            best = best.max(v);
        }
    }
    Ok(best)
}

/// `‖w‖_W` for a family (builds the norm each call; use [`WNorm`] to reuse).
pub fn w_norm(fam: &HypothesisFamily, space: &OutcomeSpace, w: &[f64]) -> Result<f64> {
    Ok(WNorm::build(fam, space)?.eval(w))
}
