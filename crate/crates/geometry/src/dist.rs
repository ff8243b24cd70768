use ib_numkit::{LinExpr, RealVector};

use crate::norm::minimize_norm;
use crate::{AffineSubspace, GeomError, NormSpec, Result, Section};

/// Minimum-norm point of an affine subspace and its norm.
pub fn min_norm_on_affine(n: &NormSpec, s: &AffineSubspace) -> Result<(Vec<f64>, f64)> {
    n.check_dim(s.ambient_dim())?;
    if *n == NormSpec::L2 {
        return Ok((s.point.as_slice().to_vec(), s.point.norm()));
    }
    let (v, x, y) = minimize_norm(n, |b| s.lp_param(b))?;
    Ok((y.iter().map(|e| e.eval(&x)).collect(), v))
}

/// `min_{y in S} ‖p - y‖`.
pub fn dist_point_to_affine(n: &NormSpec, p: &[f64], s: &AffineSubspace) -> Result<f64> {
    if p.len() != s.ambient_dim() {
        return Err(GeomError::DimensionMismatch("point vs subspace".into()));
    }
    n.check_dim(p.len())?;
    if *n == NormSpec::L2 {
        let q = s.project(p);
        return Ok((RealVector::from_column_slice(p) - RealVector::from_vec(q)).norm());
    }
    let (v, _, _) = minimize_norm(n, |b| {
        s.lp_param(b)
            .into_iter()
            .zip(p)
            .map(|(mut e, pi)| {
                e.constant -= pi;
                e
            })
            .collect()
    })?;
    Ok(v)
}

/// `min ‖p - q‖` over `p in P`, `q in Q` for polyhedral sections.
pub fn dist_between_convex(n: &NormSpec, p: &Section, q: &Section) -> Result<f64> {
    if !p.body.is_polyhedral() || !q.body.is_polyhedral() {
        return Err(GeomError::UnsupportedBody(
            "distance between round bodies".into(),
        ));
    }
    if p.dim() != q.dim() {
        return Err(GeomError::DimensionMismatch(
            "bodies of different dimension".into(),
        ));
    }
    n.check_dim(p.dim())?;
    let (v, _, _) = minimize_norm(n, |b| {
        let yp = p.lp_point(b).expect("polyhedral");
        let yq = q.lp_point(b).expect("polyhedral");
        yp.into_iter()
            .zip(yq)
            .map(|(mut a, c)| {
                a.add_scaled(&c, -1.0);
                a
            })
            .collect::<Vec<LinExpr>>()
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

/// l1 distance from a point of the hyperplane `sum(y) = 1` to the simplex,
/// which is `sum |y_a| - 1`.
pub fn l1_dist_to_simplex(y: &[f64]) -> Result<f64> {
    let tol = ib_numkit::tolerances().feas;
    let s: f64 = y.iter().sum();
    if (s - 1.0).abs() > tol * (1.0 + y.iter().map(|v| v.abs()).sum::<f64>()) {
        return Err(GeomError::NotOnHyperplane);
    }
    Ok((y.iter().map(|v| v.abs()).sum::<f64>() - 1.0).max(0.0))
}
