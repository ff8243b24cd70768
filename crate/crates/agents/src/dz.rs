use ib_certificates::ZBar;
use ib_numkit::{orthonormalize, LinExpr, LpBuilder, RealVector, Sense};

use crate::{AgentError, Result};

const MAX_CUTS: usize = 400;

/// Bracket on `min_{v in V(x, ȳ)} ‖θ - v‖_Z̄`. `upper` is attained by an
/// explicit kernel element; `lower` is the cutting-plane model value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DzBounds {
    pub lower: f64,
    pub upper: f64,
    pub iterations: usize,
}

/// Distance from `θ` (embedded as `(θ, 0)`) to `ker F̄_x^{ȳ}` in the `Z̄` norm.
pub fn dz_distance(zb: &ZBar, theta: &[f64], x: usize, ybar: &[f64]) -> Result<f64> {
    Ok(dz_bounds(zb, theta, x, ybar, 1e-9)?.upper)
}

/// Kernel elements are `(z, -F_x^{ȳ} z / μ(ȳ))`. Writing `d = θ - z` turns
/// the problem into minimising the convex piecewise-linear (or, for round
/// bodies, convex) function
///
/// `f(d) = ‖(d, F_x^{ȳ}(θ - d) / μ(ȳ))‖_Z̄`
///
/// over `d in Z`, done by Kelley cutting planes on the subgradients from
/// [`ZBar::norm_arg`]. Each cut is an exact supporting hyperplane, so the LP
/// value is a valid lower bound and the loop stops on the duality gap.
pub fn dz_bounds(zb: &ZBar, theta: &[f64], x: usize, ybar: &[f64], tol: f64) -> Result<DzBounds> {
    let (dz, dw) = (zb.dim_z, zb.dim_w);
    let fy = zb.family().f_matrix_y(x, ybar)?;
    let m: f64 = zb.mu().iter().zip(ybar).map(|(a, b)| a * b).sum();
    if m.abs() < 1e-12 {
        return Err(AgentError::InvalidParameter(
            "mean outcome has mu = 0".into(),
        ));
    }
    let fd = |d: &[f64]| -> Vec<f64> {
        let mut v = d.to_vec();
        for w in 0..dw {
            v.push((0..dz).map(|i| fy[(w, i)] * (theta[i] - d[i])).sum::<f64>() / m);
        }
        v
    };
    let eval = |d: &[f64]| -> Result<(f64, Vec<f64>)> {
        let (val, g) = zb.norm_arg(&fd(d))?;
        let s = (0..dz)
            .map(|i| g[i] - (0..dw).map(|w| g[dz + w] * fy[(w, i)]).sum::<f64>() / m)
            .collect();
        Ok((val, s))
    };

    let d0 = vec![0.0; dz];
    let (f0, s0) = eval(&d0)?;
    let mut upper = f0;
    if f0 <= tol {
        return Ok(DzBounds {
            lower: 0.0,
            upper: f0,
            iterations: 0,
        });
    }
    // f is invariant along the Z-parts of 𝒩; pinning d orthogonal to them
    // makes it coercive so the box below is only a safeguard.
    let flat: Vec<RealVector> = zb
        .null_basis
        .iter()
        .map(|n| RealVector::from_column_slice(&n[..dz]))
        .filter(|v| v.norm() > 1e-9)
        .collect();
    let flat = orthonormalize(&flat, dz);
    let theta_scale = theta.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let mut bound = 1e3 * (1.0 + theta_scale);
    let mut cuts: Vec<(f64, Vec<f64>, Vec<f64>)> = vec![(f0, s0, d0)];
    let mut lower = 0.0;
    let mut it = 0;
    while it < MAX_CUTS {
        it += 1;
        let mut lp = LpBuilder::new();
        let d = lp.frees(dz);
        let t = lp.nonneg();
        lp.objective(t, 1.0);
        for (fk, sk, dk) in &cuts {
            // fk + sk·(d - dk) - t <= 0
            let mut e = LinExpr::constant(fk - sk.iter().zip(dk).map(|(a, b)| a * b).sum::<f64>());
            for i in 0..dz {
                e.add_term(d[i], sk[i]);
            }
            e.add_term(t, -1.0);
            lp.le_zero(e);
        }
        for c in 0..flat.ncols() {
            let mut e = LinExpr::constant(0.0);
            for i in 0..dz {
                e.add_term(d[i], flat[(i, c)]);
            }
            lp.eq_zero(e);
        }
        for &di in &d {
            let mut hi = LinExpr::constant(-bound);
            hi.add_term(di, 1.0);
            lp.le_zero(hi);
            let mut lo = LinExpr::constant(-bound);
            lo.add_term(di, -1.0);
            lp.le_zero(lo);
        }
        let sol = lp.solve(Sense::Minimize)?;
        if !sol.is_optimal() {
            break;
        }
        let dn: Vec<f64> = d.iter().map(|&i| sol.point[i]).collect();
        lower = sol.value.max(lower).min(upper);
        let (fv, sv) = eval(&dn)?;
        upper = upper.min(fv);
        if upper - lower <= tol + 1e-7 * upper {
            break;
        }
        // Widening keeps every earlier cut valid.
        if dn.iter().any(|v| v.abs() >= bound * (1.0 - 1e-9)) {
            bound *= 4.0;
        }
        cuts.push((fv, sv, dn));
    }
    Ok(DzBounds {
        lower: lower.min(upper),
        upper,
        iterations: it,
    })
}
