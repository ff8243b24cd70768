use ib_geometry::{ConvexBody, Section};
use ib_model::{HypothesisFamily, OutcomeSpace};
use ib_numkit::{kernel_basis, RealMatrix};

use crate::{Result, WNorm};

/// Boundary samples used for round bodies when `dim W > 1`.
const ROUND_GRID: usize = 1024;

/// `Z̄ = (Z ⊕ W) / 𝒩` with its operator norm. Elements are handled through
/// representatives `(z, w)` of length `dim_z + dim_w`; the norm vanishes on
/// `𝒩`, so no explicit quotient chart is needed.
#[derive(Debug, Clone)]
pub struct ZBar {
    pub dim_z: usize,
    pub dim_w: usize,
    /// Basis of `𝒩 = {(z, w) : F(x, z, y) + μ(y) w = 0 for all x, y}`.
    pub null_basis: Vec<Vec<f64>>,
    /// `dim (Z ∩ 𝒩)`.
    pub z_null_dim: usize,
    pub w_norm: WNorm,
    family: HypothesisFamily,
    mu: Vec<f64>,
    body: ConvexBody,
    /// Per arm and extreme outcome `v`: the matrix `z -> F(x, z, v)` and `μ(v)`.
    blocks: Option<Vec<Vec<(RealMatrix, f64)>>>,
    approximate: bool,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl ZBar {
    pub fn build(fam: &HypothesisFamily, space: &OutcomeSpace) -> Result<Self> {
        let (dz, dw, dy) = (fam.dim_z, fam.dim_w, space.dim);
        let rows = fam.num_arms() * dy * dw;
        let mut full = RealMatrix::zeros(rows, dz + dw);
        let mut zonly = RealMatrix::zeros(rows, dz);
        let mut r = 0;
        for t in &fam.tensors {
            for j in 0..dy {
                for (w, tw) in t.iter().enumerate() {
                    for i in 0..dz {
                        full[(r, i)] = tw[i][j];
                        zonly[(r, i)] = tw[i][j];
                    }
                    full[(r, dz + w)] = space.mu[j];
                    r += 1;
                }
            }
        }
        let nb = kernel_basis(&full);
        let null_basis = (0..nb.ncols())
            .map(|c| nb.column(c).iter().cloned().collect())
            .collect();
        let z_null_dim = kernel_basis(&zonly).ncols();
        let w_norm = WNorm::build(fam, space)?;

        let extreme = match space.body.vertices() {
            Some(v) => Some((v, false)),
            None if dw > 1 => Some((space.body.extreme_points(ROUND_GRID), true)),
            None => None,
        };
        let mut approximate = w_norm.is_approximate();
        let blocks = match extreme {
            Some((verts, approx)) => {
                approximate |= approx;
                let mut b = Vec::new();
                for x in 0..fam.num_arms() {
                    let mut per = Vec::new();
                    for v in &verts {
                        per.push((fam.f_matrix_y(x, v)?, dot(&space.mu, v)));
                    }
                    b.push(per);
                }
                Some(b)
            }
            None => None,
        };
        Ok(ZBar {
            dim_z: dz,
            dim_w: dw,
            null_basis,
            z_null_dim,
            w_norm,
            family: fam.clone(),
            mu: space.mu.clone(),
            body: space.body.clone(),
            blocks,
            approximate,
        })
    }

    /// The dimension the algorithm uses: `dim Z - dim(Z ∩ 𝒩)`.
    pub fn d_z(&self) -> usize {
        self.dim_z - self.z_null_dim
    }

    pub fn dim(&self) -> usize {
        self.dim_z + self.dim_w
    }

    /// True when a round body was replaced by boundary samples somewhere.
    pub fn is_approximate(&self) -> bool {
        self.approximate
    }

    pub fn family(&self) -> &HypothesisFamily {
        &self.family
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn embed_z(&self, z: &[f64]) -> Vec<f64> {
        let mut v = z.to_vec();
        v.resize(self.dim(), 0.0);
        v
    }

    pub fn embed_w(&self, w: &[f64]) -> Vec<f64> {
        let mut v = vec![0.0; self.dim_z];
        v.extend_from_slice(w);
        v
    }

    /// `F̄(x, (z, w), y) = F(x, z, y) + μ(y) w`.
    pub fn f_bar(&self, x: usize, v: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        let mut out = self.family.apply(x, &v[..self.dim_z], y)?;
        let m = dot(&self.mu, y);
        for (o, w) in out.iter_mut().zip(&v[self.dim_z..]) {
            *o += m * w;
        }
        Ok(out)
    }

    pub fn norm(&self, v: &[f64]) -> Result<f64> {
        Ok(self.norm_arg(v)?.0)
    }

    /// `‖v‖ = max_x max_{y in D} ‖F̄(x, v, y)‖_W` together with a linear
    /// functional `g` on `Z ⊕ W` with `g·v = ‖v‖` and `g·u <= ‖u‖` for all `u`.
    pub fn norm_arg(&self, v: &[f64]) -> Result<(f64, Vec<f64>)> {
        let (dz, dw) = (self.dim_z, self.dim_w);
        let mut best = (0.0f64, vec![0.0; dz + dw]);
        if let Some(blocks) = &self.blocks {
            for per in blocks {
                for (g, m) in per {
                    let u: Vec<f64> = (0..dw)
                        .map(|w| (0..dz).map(|i| g[(w, i)] * v[i]).sum::<f64>() + m * v[dz + w])
                        .collect();
                    let (val, lam) = self.w_norm.eval_arg(&u);
                    if val > best.0 {
                        let mut f = vec![0.0; dz + dw];
                        for i in 0..dz {
                            f[i] = (0..dw).map(|w| lam[w] * g[(w, i)]).sum();
                        }
                        for w in 0..dw {
                            f[dz + w] = m * lam[w];
                        }
                        best = (val, f);
                    }
                }
            }
            return Ok(best);
        }
        // Round body with dim W = 1: the inner maximum is a linear program
        // over the body, solved exactly by the slice machinery.
        let whole = Section::whole(self.body.clone());
        for x in 0..self.family.num_arms() {
            let fz = self.family.f_matrix_z(x, &v[..dz])?;
            let c: Vec<f64> = (0..self.mu.len())
                .map(|j| fz[(0, j)] + v[dz] * self.mu[j])
                .collect();
            let neg: Vec<f64> = c.iter().map(|a| -a).collect();
            let lo = whole.linear_min(&c)?;
            let hi = whole.linear_min(&neg)?;
            let (Some((a, ya)), Some((b, yb))) = (lo, hi) else {
                continue;
            };
            // c·ya = a and c·yb = -b; keep the larger magnitude
            let (s, y) = if a.abs() >= b.abs() {
                (a, ya)
            } else {
                (-b, yb)
            };
            let (wv, lam) = self.w_norm.eval_arg(&[s]);
            if wv > best.0 {
                let fy = self.family.f_matrix_y(x, &y)?;
                let mut f: Vec<f64> = (0..dz).map(|i| lam[0] * fy[(0, i)]).collect();
                f.push(lam[0] * dot(&self.mu, &y));
                best = (wv, f);
            }
        }
        Ok(best)
    }
}

/// Build the `Z̄` machinery for a family.
pub fn build_zbar(fam: &HypothesisFamily, space: &OutcomeSpace) -> Result<ZBar> {
    ZBar::build(fam, space)
}
