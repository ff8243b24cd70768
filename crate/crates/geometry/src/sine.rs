use ib_numkit::{kernel_basis, orthonormalize, LinExpr, LpBuilder, RealMatrix, RealVector, Sense};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::body::{gauss, rv};
use crate::{AffineSubspace, ConvexBody, GeomError, NormSpec, Result, Section};

/// Default sample count for the brute-force estimators.
pub const DEFAULT_SINE_SAMPLES: usize = 20_000;

fn random_direction(basis: &RealMatrix, rng: &mut ChaCha8Rng) -> Option<RealVector> {
    if basis.ncols() == 0 {
        return None;
    }
    loop {
        let c = RealVector::from_fn(basis.ncols(), |_, _| gauss(rng));
        let v = basis * c;
        let n = v.norm();
        if n > 1e-9 {
            return Some(v / n);
        }
    }
}

// log-uniform step beyond the boundary, occasionally a long one
fn overshoot(rng: &mut ChaCha8Rng) -> f64 {
    if rng.gen_bool(0.8) {
        10f64.powf(rng.gen_range(-5.0..0.0))
    } else {
        rng.gen_range(0.0..3.0)
    }
}

/// Largest `t >= 0` with `q + t v` in the body.
fn ray_exit(body: &ConvexBody, q: &RealVector, v: &RealVector) -> Result<f64> {
    match body {
        ConvexBody::SimplexOfLabels { .. } => {
            if v.sum().abs() > 1e-12 {
                return Ok(0.0);
            }
            let mut t = f64::INFINITY;
            for (qi, vi) in q.iter().zip(v.iter()) {
                if *vi < 0.0 {
                    t = t.min((qi.max(0.0)) / -vi);
                }
            }
            Ok(if t.is_finite() { t } else { 0.0 })
        }
        b if b.is_polyhedral() => {
            let verts = b.vertices().expect("polyhedral");
            let mut lp = LpBuilder::new();
            let t = lp.nonneg();
            let lam = lp.nonnegs(verts.len());
            lp.objective(t, 1.0);
            let mut s = LinExpr::constant(-1.0);
            for &l in &lam {
                s.add_term(l, 1.0);
            }
            lp.eq_zero(s);
            for i in 0..q.len() {
                let mut e = LinExpr::constant(q[i]);
                e.add_term(t, v[i]);
                for (k, vert) in verts.iter().enumerate() {
                    e.add_term(lam[k], -vert[i]);
                }
                lp.eq_zero(e);
            }
            let sol = lp.solve(Sense::Maximize)?;
            Ok(if sol.is_optimal() { sol.point[t] } else { 0.0 })
        }
        _ => {
            let inside = |t: f64| body.contains((q + v * t).as_slice(), 1e-12);
            if !inside(0.0) {
                return Ok(0.0);
            }
            let mut hi = 1.0;
            let mut lo = 0.0;
            while inside(hi) {
                lo = hi;
                hi *= 2.0;
                if hi > 1e12 {
                    return Err(GeomError::DegenerateInput(
                        "body is unbounded along a ray".into(),
                    ));
                }
            }
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if inside(mid) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Ok(lo)
        }
    }
}

/// A point in the relative interior of a nonempty section, or None.
fn interior_point(sec: &Section, dirs: &RealMatrix) -> Result<Option<RealVector>> {
    let n = sec.dim();
    let mut acc = RealVector::zeros(n);
    let mut count = 0.0;
    let mut probe: Vec<RealVector> = Vec::new();
    for j in 0..dirs.ncols() {
        probe.push(dirs.column(j).into_owned());
        probe.push(-dirs.column(j).into_owned());
    }
    if probe.is_empty() {
        probe.push(RealVector::zeros(n));
    }
    for c in probe {
        match sec.linear_min(c.as_slice())? {
            Some((_, p)) => {
                acc += rv(&p);
                count += 1.0;
            }
            None => return Ok(None),
        }
    }
    Ok(Some(acc / count))
}

/// Upper estimate of the sine of the affine subspace `b` relative to the
/// body `d`: the minimum of `d(p, D) / d(p, B ∩ D)` over sampled points
/// `p in B \ D`. Samples are taken along rays from an interior point of
/// `B ∩ D`, just past where they leave the body.
pub fn sine_bruteforce(
    b: &AffineSubspace,
    d: &ConvexBody,
    n: &NormSpec,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    if b.ambient_dim() != d.dim() {
        return Err(GeomError::DimensionMismatch("subspace vs body".into()));
    }
    n.check_dim(d.dim())?;
    let whole = Section::whole(d.clone());
    let sec = Section::new(d.clone(), b.clone());
    let q0 = interior_point(&sec, &b.basis)?.ok_or(GeomError::EmptyIntersection)?;
    if b.dim() == 0 {
        return Err(GeomError::DegenerateInput(
            "subspace is a point inside the body".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = f64::INFINITY;
    for _ in 0..samples {
        let v = random_direction(&b.basis, &mut rng).expect("dim > 0");
        let t = ray_exit(d, &q0, &v)?;
        let p = &q0 + &v * (t + overshoot(&mut rng));
        let den = sec.dist(n, p.as_slice())?;
        if den < 1e-12 {
            continue;
        }
        let num = whole.dist(n, p.as_slice())?;
        best = best.min(num / den);
    }
    if best.is_infinite() {
        return Err(GeomError::DegenerateInput(
            "no sampled point lies outside the body".into(),
        ));
    }
    Ok(best)
}

/// Brute-force sine of `b` relative to another affine subspace `c` in the
/// Euclidean norm.
pub fn sine_bruteforce_subspace(
    b: &AffineSubspace,
    c: &AffineSubspace,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    let bc = b.intersect(c).map_err(|e| {
        if e == GeomError::EmptySubspace {
            GeomError::EmptyIntersection
        } else {
            e
        }
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = f64::INFINITY;
    for _ in 0..samples {
        let Some(v) = random_direction(&b.basis, &mut rng) else {
            break;
        };
        let p = &bc.point + v * rng.gen_range(0.01..2.0);
        let den = crate::dist_point_to_affine(&NormSpec::L2, p.as_slice(), &bc)?;
        if den < 1e-9 {
            continue;
        }
        let num = crate::dist_point_to_affine(&NormSpec::L2, p.as_slice(), c)?;
        best = best.min(num / den);
    }
    if best.is_infinite() {
        return Err(GeomError::DegenerateInput(
            "subspace is contained in the target".into(),
        ));
    }
    Ok(best)
}

fn span_basis(vs: &[Vec<f64>], dim: usize) -> Result<RealMatrix> {
    if vs.iter().any(|v| v.len() != dim) {
        return Err(GeomError::DimensionMismatch("spanning vectors".into()));
    }
    Ok(orthonormalize(
        &vs.iter().map(|v| rv(v)).collect::<Vec<_>>(),
        dim,
    ))
}

/// Sine of the first non-vanishing principal angle between the linear
/// spans of `b` and `c`, after removing their common part.
pub fn sine_principal_angles(b: &[Vec<f64>], c: &[Vec<f64>], dim: usize) -> Result<f64> {
    let qb = span_basis(b, dim)?;
    let qc = span_basis(c, dim)?;
    let eye = RealMatrix::identity(dim, dim);
    let pb = &eye - &qb * qb.transpose();
    let pc = &eye - &qc * qc.transpose();
    let stacked = RealMatrix::from_fn(2 * dim, dim, |i, j| {
        if i < dim {
            pb[(i, j)]
        } else {
            pc[(i - dim, j)]
        }
    });
    let common = kernel_basis(&stacked);
    let proj = &eye - &common * common.transpose();
    let rest = |q: &RealMatrix| {
        let cols: Vec<RealVector> = (0..q.ncols()).map(|j| &proj * q.column(j)).collect();
        orthonormalize(&cols, dim)
    };
    let b2 = rest(&qb);
    let c2 = rest(&qc);
    if b2.ncols() == 0 {
        return Err(GeomError::DegenerateInput(
            "first subspace is contained in the second".into(),
        ));
    }
    if c2.ncols() == 0 {
        return Ok(1.0);
    }
    let m = b2.transpose() * c2;
    let smax = m
        .singular_values()
        .iter()
        .cloned()
        .fold(0.0, f64::max)
        .min(1.0);
    Ok((1.0 - smax * smax).max(0.0).sqrt())
}

/// Lower bound on the sine of a subspace relative to the simplex:
/// `max_{y in U ∩ Δ} min_{i in E} y_i`.
pub fn sine_simplex_lb(u: &AffineSubspace, support: &[usize]) -> Result<f64> {
    let labels = u.ambient_dim();
    if support.iter().any(|&i| i >= labels) || support.is_empty() {
        return Err(GeomError::DimensionMismatch("support labels".into()));
    }
    let sec = Section::new(ConvexBody::simplex(labels), u.clone());
    let mut lp = LpBuilder::new();
    let y = sec.lp_point(&mut lp)?;
    let t = lp.free();
    lp.objective(t, 1.0);
    for &i in support {
        let mut e = LinExpr::var(t);
        e.add_scaled(&y[i], -1.0);
        lp.le_zero(e);
    }
    let s = lp.solve(Sense::Maximize)?;
    if !s.is_optimal() {
        return Err(GeomError::EmptyIntersection);
    }
    Ok(s.value)
}

/// Sine of an affine subspace relative to the unit ball centred at the
/// origin: `sqrt(1 - ρ²)` with ρ the distance from the centre.
pub fn sine_ball(u: &AffineSubspace) -> Result<f64> {
    let rho = u.point.norm();
    if rho > 1.0 + 1e-12 {
        return Err(GeomError::EmptyIntersection);
    }
    Ok((1.0 - rho * rho).max(0.0).sqrt())
}

/// Sine for a chain of conditional constraints: the smallest component.
pub fn sine_chain(component_sines: &[f64]) -> Result<f64> {
    if component_sines.is_empty() || component_sines.iter().any(|s| !(0.0..=1.0).contains(s)) {
        return Err(GeomError::DegenerateInput(
            "chain sines must be a nonempty list in [0,1]".into(),
        ));
    }
    Ok(component_sines.iter().cloned().fold(1.0, f64::min))
}

/// Lower bound for subspaces fixing the probabilities of a family of events.
pub fn sine_prob_system(family_size: usize) -> Result<f64> {
    if family_size == 0 {
        return Err(GeomError::DegenerateInput("empty family of events".into()));
    }
    Ok(1.0 / family_size as f64)
}
