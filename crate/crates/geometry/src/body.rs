use ib_numkit::{kernel_basis, LinExpr, LpBuilder, RealMatrix, RealVector, Sense};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{AffineSubspace, GeomError, NormBlock, NormSpec, Result};

/// A compact convex set.
///
/// `Ball` is `{center + E t : |t| <= radius}` for orthonormal axis vectors
/// `E`. `ConeBall` is the convex hull of `apex` and such a ball, with the
/// axis `apex - base_center` orthogonal to the ball's axes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConvexBody {
    Polytope {
        vertices: Vec<Vec<f64>>,
    },
    SimplexOfLabels {
        labels: usize,
    },
    Segment {
        a: Vec<f64>,
        b: Vec<f64>,
    },
    Ball {
        center: Vec<f64>,
        axes: Vec<Vec<f64>>,
        radius: f64,
    },
    ConeBall {
        apex: Vec<f64>,
        base_center: Vec<f64>,
        axes: Vec<Vec<f64>>,
        radius: f64,
    },
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn unit(dim: usize, k: usize) -> Vec<f64> {
    let mut e = vec![0.0; dim];
    e[k] = 1.0;
    e
}

fn as_unit(v: &[f64]) -> Option<usize> {
    let mut idx = None;
    for (i, &x) in v.iter().enumerate() {
        if (x - 1.0).abs() < 1e-12 {
            if idx.is_some() {
                return None;
            }
            idx = Some(i);
        } else if x.abs() > 1e-12 {
            return None;
        }
    }
    idx
}

/// A ball `{m + U s : |s| <= rho}` with orthonormal columns `U`.
#[derive(Debug, Clone)]
pub(crate) struct Disk {
    pub m: RealVector,
    pub u: RealMatrix,
    pub rho: f64,
}

impl Disk {
    fn linear_min(&self, c: &RealVector) -> (f64, RealVector) {
        let g = self.u.transpose() * c;
        let gn = g.norm();
        let val = c.dot(&self.m) - self.rho * gn;
        let pt = if gn > 0.0 {
            &self.m - &self.u * (g * (self.rho / gn))
        } else {
            self.m.clone()
        };
        (val, pt)
    }

    fn l2_dist(&self, p: &RealVector) -> f64 {
        let d = p - &self.m;
        let s = self.u.transpose() * &d;
        let perp = (&d - &self.u * &s).norm_squared();
        let inside = (s.norm() - self.rho).max(0.0);
        (perp + inside * inside).sqrt()
    }
}

impl ConvexBody {
    pub fn simplex(labels: usize) -> Self {
        ConvexBody::SimplexOfLabels { labels }
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexBody::Polytope { vertices } => vertices.first().map_or(0, |v| v.len()),
            ConvexBody::SimplexOfLabels { labels } => *labels,
            ConvexBody::Segment { a, .. } => a.len(),
            ConvexBody::Ball { center, .. } => center.len(),
            ConvexBody::ConeBall { apex, .. } => apex.len(),
        }
    }

    /// Structural checks: consistent lengths, orthonormal axes, nonempty.
    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        let bad = |m: &str| Err(GeomError::DimensionMismatch(m.to_string()));
        match self {
            ConvexBody::Polytope { vertices } => {
                if vertices.is_empty() || vertices.iter().any(|v| v.len() != n) {
                    return bad("polytope vertices");
                }
            }
            ConvexBody::SimplexOfLabels { labels } => {
                if *labels == 0 {
                    return bad("simplex needs a label");
                }
            }
            ConvexBody::Segment { a, b } => {
                if a.len() != b.len() {
                    return bad("segment endpoints");
                }
            }
            ConvexBody::Ball {
                center,
                axes,
                radius,
            }
            | ConvexBody::ConeBall {
                base_center: center,
                axes,
                radius,
                ..
            } => {
                if center.len() != n || axes.iter().any(|a| a.len() != n) || !(*radius > 0.0) {
                    return bad("ball axes/center/radius");
                }
                for (i, a) in axes.iter().enumerate() {
                    for (j, b) in axes.iter().enumerate() {
                        let want = if i == j { 1.0 } else { 0.0 };
                        if (dot(a, b) - want).abs() > 1e-9 {
                            return Err(GeomError::UnsupportedBody(
                                "ball axes must be orthonormal".into(),
                            ));
                        }
                    }
                }
                if let ConvexBody::ConeBall { apex, .. } = self {
                    let h: Vec<f64> = apex.iter().zip(center).map(|(x, y)| x - y).collect();
                    if axes.iter().any(|a| dot(a, &h).abs() > 1e-9) {
                        return Err(GeomError::UnsupportedBody(
                            "cone axis must be orthogonal to the base".into(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_polyhedral(&self) -> bool {
        matches!(
            self,
            ConvexBody::Polytope { .. }
                | ConvexBody::SimplexOfLabels { .. }
                | ConvexBody::Segment { .. }
        )
    }

    /// Vertex list of a polyhedral body.
    pub fn vertices(&self) -> Option<Vec<Vec<f64>>> {
        match self {
            ConvexBody::Polytope { vertices } => Some(vertices.clone()),
            ConvexBody::SimplexOfLabels { labels } => {
                Some((0..*labels).map(|k| unit(*labels, k)).collect())
            }
            ConvexBody::Segment { a, b } => Some(vec![a.clone(), b.clone()]),
            _ => None,
        }
    }

    /// Extreme points: exact for polyhedral bodies, a deterministic
    /// boundary grid of about `grid` points for round ones.
    pub fn extreme_points(&self, grid: usize) -> Vec<Vec<f64>> {
        if let Some(v) = self.vertices() {
            return v;
        }
        match self {
            ConvexBody::Ball {
                center,
                axes,
                radius,
            } => sphere_grid(center, axes, *radius, grid),
            ConvexBody::ConeBall {
                apex,
                base_center,
                axes,
                radius,
            } => {
                let mut pts = vec![apex.clone()];
                pts.extend(sphere_grid(
                    base_center,
                    axes,
                    *radius,
                    grid.saturating_sub(1).max(2),
                ));
                pts
            }
            _ => unreachable!(),
        }
    }

    /// The norm whose unit ball is the absolute convex hull of the body.
    /// Available for polyhedral bodies and for round bodies in the
    /// coordinate-aligned form used by the scenarios (unit ball or cone over
    /// a unit ball, with the apex/center on standard basis vectors).
    pub fn hull_norm(&self) -> Result<NormSpec> {
        let n = self.dim();
        match self {
            ConvexBody::SimplexOfLabels { .. } => Ok(NormSpec::L1),
            ConvexBody::Segment { a, b } => {
                // {(1, t) : |t| <= 1} gives the max norm
                if n == 2 && a == &vec![1.0, -1.0] && b == &vec![1.0, 1.0] {
                    Ok(NormSpec::LInf)
                } else {
                    Ok(NormSpec::PolytopeHull {
                        vertices: vec![a.clone(), b.clone()],
                    })
                }
            }
            ConvexBody::Polytope { vertices } => Ok(NormSpec::PolytopeHull {
                vertices: vertices.clone(),
            }),
            ConvexBody::Ball {
                center,
                axes,
                radius,
            } => {
                let k = as_unit(center).filter(|_| (*radius - 1.0).abs() < 1e-12);
                let ax: Option<Vec<usize>> = axes.iter().map(|a| as_unit(a)).collect();
                match (k, ax) {
                    (Some(k), Some(ax)) if ax.len() + 1 == n && !ax.contains(&k) => {
                        Ok(NormSpec::MaxOfBlocks {
                            blocks: vec![
                                NormBlock::new(ax, NormSpec::L2),
                                NormBlock::new(vec![k], NormSpec::L1),
                            ],
                        })
                    }
                    _ => Err(GeomError::UnsupportedBody(
                        "ball not in coordinate-aligned unit form".into(),
                    )),
                }
            }
            ConvexBody::ConeBall {
                apex,
                base_center,
                axes,
                radius,
            } => {
                let i = as_unit(apex);
                let j = as_unit(base_center).filter(|_| (*radius - 1.0).abs() < 1e-12);
                let ax: Option<Vec<usize>> = axes.iter().map(|a| as_unit(a)).collect();
                match (i, j, ax) {
                    (Some(i), Some(j), Some(ax))
                        if i != j && ax.len() + 2 == n && !ax.contains(&i) && !ax.contains(&j) =>
                    {
                        let mut base_idx = vec![j];
                        base_idx.extend(ax.iter().cloned());
                        let inner = NormSpec::MaxOfBlocks {
                            blocks: vec![
                                NormBlock::new(vec![0], NormSpec::L1),
                                NormBlock::new((1..=ax.len()).collect(), NormSpec::L2),
                            ],
                        };
                        Ok(NormSpec::SumOfBlocks {
                            blocks: vec![
                                NormBlock::new(vec![i], NormSpec::L1),
                                NormBlock::new(base_idx, inner),
                            ],
                        })
                    }
                    _ => Err(GeomError::UnsupportedBody(
                        "cone not in coordinate-aligned unit form".into(),
                    )),
                }
            }
        }
    }

    pub fn contains(&self, y: &[f64], tol: f64) -> bool {
        if y.len() != self.dim() {
            return false;
        }
        match self {
            ConvexBody::SimplexOfLabels { .. } => {
                y.iter().all(|v| *v >= -tol) && (y.iter().sum::<f64>() - 1.0).abs() <= tol
            }
            ConvexBody::Segment { a, b } => {
                let d: Vec<f64> = b.iter().zip(a).map(|(p, q)| p - q).collect();
                let dd = dot(&d, &d);
                let t = if dd > 0.0 {
                    dot(&d, &y.iter().zip(a).map(|(p, q)| p - q).collect::<Vec<_>>()) / dd
                } else {
                    0.0
                };
                let tc = t.clamp(0.0, 1.0);
                a.iter()
                    .zip(&d)
                    .zip(y)
                    .all(|((ai, di), yi)| (ai + tc * di - yi).abs() <= tol)
            }
            ConvexBody::Polytope { .. } => {
                let s = Section::whole(self.clone());
                s.l2_dist(y).map(|d| d <= tol).unwrap_or(false)
            }
            ConvexBody::Ball {
                center,
                axes,
                radius,
            } => {
                let d = Disk {
                    m: rv(center),
                    u: cols(axes, y.len()),
                    rho: *radius,
                };
                d.l2_dist(&rv(y)) <= tol
            }
            ConvexBody::ConeBall {
                apex,
                base_center,
                axes,
                radius,
            } => {
                let h: Vec<f64> = apex.iter().zip(base_center).map(|(p, q)| p - q).collect();
                let hh = dot(&h, &h);
                let yc: Vec<f64> = y.iter().zip(base_center).map(|(p, q)| p - q).collect();
                let one_minus_s = dot(&yc, &h) / hh;
                let s = 1.0 - one_minus_s;
                if s < -tol || s > 1.0 + tol {
                    return false;
                }
                let d = Disk {
                    m: rv(base_center) + rv(&h) * one_minus_s,
                    u: cols(axes, y.len()),
                    rho: (s * radius).max(0.0),
                };
                d.l2_dist(&rv(y)) <= tol
            }
        }
    }
}

pub(crate) fn rv(v: &[f64]) -> RealVector {
    RealVector::from_column_slice(v)
}

pub(crate) fn cols(vs: &[Vec<f64>], dim: usize) -> RealMatrix {
    let mut m = RealMatrix::zeros(dim, vs.len());
    for (j, v) in vs.iter().enumerate() {
        for i in 0..dim {
            m[(i, j)] = v[i];
        }
    }
    m
}

fn sphere_grid(center: &[f64], axes: &[Vec<f64>], r: f64, grid: usize) -> Vec<Vec<f64>> {
    let k = axes.len();
    let emb = |t: &[f64]| -> Vec<f64> {
        let mut p = center.to_vec();
        for (a, ti) in axes.iter().zip(t) {
            for (pi, ai) in p.iter_mut().zip(a) {
                *pi += r * ti * ai;
            }
        }
        p
    };
    match k {
        0 => vec![center.to_vec()],
        1 => vec![emb(&[1.0]), emb(&[-1.0])],
        2 => (0..grid)
            .map(|i| {
                let a = 2.0 * std::f64::consts::PI * i as f64 / grid as f64;
                emb(&[a.cos(), a.sin()])
            })
            .collect(),
        3 => {
            // Fibonacci lattice on the 2-sphere.
            let g = (1.0 + 5f64.sqrt()) / 2.0;
            (0..grid)
                .map(|i| {
                    let z = 1.0 - 2.0 * (i as f64 + 0.5) / grid as f64;
                    let rho = (1.0 - z * z).sqrt();
                    let phi = 2.0 * std::f64::consts::PI * i as f64 / g;
                    emb(&[rho * phi.cos(), rho * phi.sin(), z])
                })
                .collect()
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            let mut pts = Vec::with_capacity(grid + 2 * k);
            for i in 0..k {
                for s in [1.0, -1.0] {
                    let mut t = vec![0.0; k];
                    t[i] = s;
                    pts.push(emb(&t));
                }
            }
            while pts.len() < grid.max(2 * k) {
                let t: Vec<f64> = (0..k).map(|_| gauss(&mut rng)).collect();
                let n = t.iter().map(|x| x * x).sum::<f64>().sqrt();
                if n > 1e-9 {
                    let t: Vec<f64> = t.iter().map(|x| x / n).collect();
                    pts.push(emb(&t));
                }
            }
            pts
        }
    }
}

pub(crate) fn gauss<R: Rng>(rng: &mut R) -> f64 {
    // Box-Muller; one draw per call is plenty here.
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// A body intersected with an optional affine subspace. Credal sections
/// `K(x)+` are of this form.
#[derive(Debug, Clone)]
pub struct Section {
    pub body: ConvexBody,
    pub constraint: Option<AffineSubspace>,
}

/// Slices `{m + E t : |t| <= r} ∩ constraint` for a fixed axis matrix `E`.
/// The constraint part depends only on `E`, so it is factored once.
struct Slicer<'a> {
    e: RealMatrix,
    c: Option<&'a AffineSubspace>,
    g: RealMatrix,
    g_pinv: RealMatrix,
    kern: RealMatrix,
}

impl<'a> Slicer<'a> {
    fn new(e: RealMatrix, c: Option<&'a AffineSubspace>) -> Self {
        let (g, g_pinv, kern) = match c {
            Some(c) if e.ncols() > 0 => {
                let g = &c.a * &e;
                let pinv = g
                    .clone()
                    .pseudo_inverse(1e-12)
                    .unwrap_or_else(|_| RealMatrix::zeros(e.ncols(), g.nrows()));
                let kern = kernel_basis(&g);
                (g, pinv, kern)
            }
            _ => (
                RealMatrix::zeros(0, 0),
                RealMatrix::zeros(0, 0),
                RealMatrix::zeros(0, 0),
            ),
        };
        Slicer {
            e,
            c,
            g,
            g_pinv,
            kern,
        }
    }

    /// How far the slice is from meeting the constraint (0 when it does).
    fn excess(&self, m: &RealVector, r: f64) -> f64 {
        let Some(c) = self.c else { return 0.0 };
        let rhs = &c.b - &c.a * m;
        if self.e.ncols() == 0 {
            return rhs.amax();
        }
        let t0 = &self.g_pinv * &rhs;
        (&self.g * &t0 - &rhs).amax() + (t0.norm() - r.max(0.0)).max(0.0)
    }

    fn slice(&self, m: &RealVector, r: f64) -> Option<Disk> {
        let Some(c) = self.c else {
            return Some(Disk {
                m: m.clone(),
                u: self.e.clone(),
                rho: r,
            });
        };
        let rhs = &c.b - &c.a * m;
        let scale = 1e-9 * (1.0 + c.b.amax() + m.amax());
        if self.e.ncols() == 0 || r <= 0.0 {
            return (rhs.amax() <= scale).then(|| Disk {
                m: m.clone(),
                u: RealMatrix::zeros(m.len(), 0),
                rho: 0.0,
            });
        }
        let t0 = &self.g_pinv * &rhs;
        if (&self.g * &t0 - &rhs).amax() > scale {
            return None;
        }
        let t2 = t0.norm_squared();
        if t2.sqrt() > r + 1e-9 {
            return None;
        }
        let rho = (r * r - t2).max(0.0).sqrt();
        Some(Disk {
            m: m + &self.e * &t0,
            u: &self.e * &self.kern,
            rho,
        })
    }
}

fn golden_min<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..120 {
        if hi - lo < 1e-13 {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = f(x2);
        }
    }
    let cands = [(lo, f(lo)), (hi, f(hi)), (x1, f1), (x2, f2)];
    cands
        .into_iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap()
}

impl Section {
    pub fn whole(body: ConvexBody) -> Self {
        Section {
            body,
            constraint: None,
        }
    }

    pub fn new(body: ConvexBody, constraint: AffineSubspace) -> Self {
        Section {
            body,
            constraint: Some(constraint),
        }
    }

    pub fn dim(&self) -> usize {
        self.body.dim()
    }

    /// LP variables describing a point of a polyhedral section; returns its
    /// coordinates as affine expressions.
    pub fn lp_point(&self, b: &mut LpBuilder) -> Result<Vec<LinExpr>> {
        let n = self.dim();
        let y: Vec<LinExpr> = match &self.body {
            ConvexBody::SimplexOfLabels { labels } => {
                let v = b.nonnegs(*labels);
                let mut s = LinExpr::constant(-1.0);
                for &vi in &v {
                    s.add_term(vi, 1.0);
                }
                b.eq_zero(s);
                v.into_iter().map(LinExpr::var).collect()
            }
            body if body.is_polyhedral() => {
                let verts = body.vertices().expect("polyhedral");
                let lam = b.nonnegs(verts.len());
                let mut s = LinExpr::constant(-1.0);
                for &l in &lam {
                    s.add_term(l, 1.0);
                }
                b.eq_zero(s);
                (0..n)
                    .map(|i| {
                        let mut e = LinExpr::default();
                        for (k, v) in verts.iter().enumerate() {
                            e.add_term(lam[k], v[i]);
                        }
                        e
                    })
                    .collect()
            }
            _ => {
                return Err(GeomError::UnsupportedBody(
                    "round body has no LP description".into(),
                ))
            }
        };
        if let Some(c) = &self.constraint {
            for i in 0..c.a.nrows() {
                let mut e = LinExpr::constant(-c.b[i]);
                for (j, yj) in y.iter().enumerate() {
                    e.add_scaled(yj, c.a[(i, j)]);
                }
                b.eq_zero(e);
            }
        }
        Ok(y)
    }

    /// `min c·y` over the section; `None` when the section is empty.
    pub fn linear_min(&self, c: &[f64]) -> Result<Option<(f64, Vec<f64>)>> {
        if c.len() != self.dim() {
            return Err(GeomError::DimensionMismatch("objective length".into()));
        }
        if self.body.is_polyhedral() {
            let mut b = LpBuilder::new();
            let y = self.lp_point(&mut b)?;
            let mut obj = LinExpr::default();
            for (yi, ci) in y.iter().zip(c) {
                obj.add_scaled(yi, *ci);
            }
            for &(v, w) in &obj.terms {
                b.objective(v, w);
            }
            let s = b.solve(Sense::Minimize)?;
            if !s.is_optimal() {
                return Ok(None);
            }
            let pt: Vec<f64> = y.iter().map(|e| e.eval(&s.point)).collect();
            return Ok(Some((dot(c, &pt), pt)));
        }
        let cv = rv(c);
        let res = self.over_slices(|d| d.linear_min(&cv).0)?;
        Ok(res.map(|(_, disk)| {
            let (v, p) = disk.linear_min(&cv);
            (v, p.as_slice().to_vec())
        }))
    }

    /// `max |f·y|` over the section (None when empty).
    pub fn abs_max(&self, f: &[f64]) -> Result<Option<f64>> {
        let neg: Vec<f64> = f.iter().map(|v| -v).collect();
        let lo = self.linear_min(f)?;
        let hi = self.linear_min(&neg)?;
        Ok(match (lo, hi) {
            (Some((a, _)), Some((b, _))) => Some(a.abs().max(b.abs())),
            _ => None,
        })
    }

    /// Minimise `g(slice)` over the slices of a round body. For a ball there
    /// is one slice; for a cone the slice parameter is found by golden
    /// section, which is exact for the convex value functions used here.
    fn over_slices<G: Fn(&Disk) -> f64>(&self, g: G) -> Result<Option<(f64, Disk)>> {
        let n = self.dim();
        match &self.body {
            ConvexBody::Ball {
                center,
                axes,
                radius,
            } => {
                let sl = Slicer::new(cols(axes, n), self.constraint.as_ref());
                Ok(sl.slice(&rv(center), *radius).map(|d| (g(&d), d)))
            }
            ConvexBody::ConeBall {
                apex,
                base_center,
                axes,
                radius,
            } => {
                let sl = Slicer::new(cols(axes, n), self.constraint.as_ref());
                let ap = rv(apex);
                let bc = rv(base_center);
                let slice = |s: f64| -> Option<Disk> {
                    let s = s.max(0.0);
                    sl.slice(&(&ap * (1.0 - s) + &bc * s), s * radius)
                };
                // Feasible slice parameters form an interval. Find one
                // point of it by minimising the (convex) infeasibility, then
                // bisect out to both ends.
                let mid_of = |s: f64| &ap * (1.0 - s) + &bc * s;
                let (s0, ex) = golden_min(|s| sl.excess(&mid_of(s), s * radius), 0.0, 1.0);
                if ex > 1e-9 || slice(s0).is_none() {
                    return Ok(None);
                }
                let refine = |mut inside: f64, mut outside: f64| {
                    if slice(outside).is_some() {
                        return outside;
                    }
                    for _ in 0..60 {
                        let mid = 0.5 * (inside + outside);
                        if slice(mid).is_some() {
                            inside = mid;
                        } else {
                            outside = mid;
                        }
                    }
                    inside
                };
                let lo = refine(s0, 0.0);
                let hi = refine(s0, 1.0);
                let f = |s: f64| slice(s).map_or(f64::INFINITY, |d| g(&d));
                let (s, v) = golden_min(f, lo, hi);
                Ok(slice(s).map(|d| (v, d)))
            }
            _ => unreachable!("polyhedral bodies are handled by LP"),
        }
    }

    /// Euclidean distance from `p` to the section.
    pub fn l2_dist(&self, p: &[f64]) -> Result<f64> {
        self.dist(&NormSpec::L2, p)
    }

    /// Distance from `p` to the section in the norm `n`.
    pub fn dist(&self, n: &NormSpec, p: &[f64]) -> Result<f64> {
        if p.len() != self.dim() {
            return Err(GeomError::DimensionMismatch("point length".into()));
        }
        if !self.body.is_polyhedral() {
            if *n != NormSpec::L2 {
                return Err(GeomError::UnsupportedBody(
                    "round bodies support Euclidean distances only".into(),
                ));
            }
            let pv = rv(p);
            return self
                .over_slices(|d| d.l2_dist(&pv))?
                .map(|r| r.0)
                .ok_or(GeomError::EmptyIntersection);
        }
        // Closed form for the plain simplex in the l1 norm.
        if let (ConvexBody::SimplexOfLabels { .. }, None, NormSpec::L1) =
            (&self.body, &self.constraint, n)
        {
            if (p.iter().sum::<f64>() - 1.0).abs() <= 1e-12 {
                return Ok(p.iter().map(|v| v.abs()).sum::<f64>() - 1.0);
            }
        }
        let (v, _, _) = crate::norm::minimize_norm(n, |b| {
            let y = self.lp_point(b).expect("polyhedral");
            y.into_iter()
                .zip(p)
                .map(|(mut e, pi)| {
                    e.constant -= pi;
                    e
                })
                .collect()
        })
        .map_err(|e| {
            if e == GeomError::EmptySubspace {
                GeomError::EmptyIntersection
            } else {
                e
            }
        })?;
        Ok(v)
    }

    pub fn is_empty(&self) -> Result<bool> {
        let zero = vec![0.0; self.dim()];
        Ok(self.linear_min(&zero)?.is_none())
    }
}
