use nalgebra::{DMatrix, DVector};

use crate::{tolerances, NumError};

pub type RealMatrix = DMatrix<f64>;
pub type RealVector = DVector<f64>;

/// Build a matrix from row slices. An empty row list yields a 0×`ncols` matrix.
pub fn mat_from_rows(rows: &[Vec<f64>], ncols: usize) -> Result<RealMatrix, NumError> {
    for (i, r) in rows.iter().enumerate() {
        if r.len() != ncols {
            return Err(NumError::DimensionMismatch(format!(
                "row {i} has {} entries, expected {ncols}",
                r.len()
            )));
        }
    }
    Ok(DMatrix::from_fn(rows.len(), ncols, |i, j| rows[i][j]))
}

fn max_abs(m: &RealMatrix) -> f64 {
    m.iter().fold(0.0f64, |a, &v| a.max(v.abs()))
}

fn check_finite(m: &RealMatrix) -> Result<(), NumError> {
    if m.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(NumError::NonFinite)
    }
}

/// Reduced row echelon form computed with full pivoting.
#[derive(Debug, Clone)]
pub struct Rref {
    /// The reduced matrix; rows past `pivots.len()` are numerically zero.
    pub reduced: RealMatrix,
    /// Pivot column of each leading row, in row order.
    pub pivots: Vec<usize>,
}

/// Gauss-Jordan elimination choosing the largest remaining entry as pivot.
/// Entries below `rank_eps * max|M|` count as zero.
pub fn rref(m: &RealMatrix) -> Rref {
    let mut a = m.clone();
    let (nr, nc) = a.shape();
    let thresh = tolerances().rank * max_abs(m).max(f64::MIN_POSITIVE);
    let mut pivots = Vec::new();
    let mut col_used = vec![false; nc];
    let mut row = 0;
    while row < nr {
        let mut best = (0.0, 0, 0);
        for i in row..nr {
            for j in 0..nc {
                if !col_used[j] && a[(i, j)].abs() > best.0 {
                    best = (a[(i, j)].abs(), i, j);
                }
            }
        }
        if best.0 <= thresh {
            break;
        }
        let (_, pi, pj) = best;
        a.swap_rows(row, pi);
        let p = a[(row, pj)];
        for j in 0..nc {
            a[(row, j)] /= p;
        }
        for i in 0..nr {
            if i != row {
                let f = a[(i, pj)];
                if f != 0.0 {
                    for j in 0..nc {
                        a[(i, j)] -= f * a[(row, j)];
                    }
                }
            }
        }
        col_used[pj] = true;
        pivots.push(pj);
        row += 1;
    }
    for i in row..nr {
        for j in 0..nc {
            a[(i, j)] = 0.0;
        }
    }
    Rref { reduced: a, pivots }
}

/// Numerical rank with threshold `rank_eps * max|M|`.
pub fn rank(m: &RealMatrix) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    rref(m).pivots.len()
}

/// Orthonormal basis of the null space, one basis vector per column.
pub fn kernel_basis(m: &RealMatrix) -> RealMatrix {
    let nc = m.ncols();
    if m.nrows() == 0 {
        return DMatrix::identity(nc, nc);
    }
    let r = rref(m);
    let free: Vec<usize> = (0..nc).filter(|j| !r.pivots.contains(j)).collect();
    let mut cols = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = DVector::zeros(nc);
        v[f] = 1.0;
        for (i, &p) in r.pivots.iter().enumerate() {
            v[p] = -r.reduced[(i, f)];
        }
        cols.push(v);
    }
    orthonormalize(&cols, nc)
}

/// Modified Gram-Schmidt with one re-orthogonalization pass. Vectors that
/// become numerically dependent are dropped.
pub fn orthonormalize(vs: &[RealVector], dim: usize) -> RealMatrix {
    let mut out: Vec<RealVector> = Vec::new();
    for v in vs {
        let scale = v.norm();
        if scale == 0.0 {
            continue;
        }
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &out {
                let d = q.dot(&w);
                w.axpy(-d, q, 1.0);
            }
        }
        let n = w.norm();
        if n > 1e-10 * scale {
            out.push(w / n);
        }
    }
    let mut m = DMatrix::zeros(dim, out.len());
    for (j, q) in out.iter().enumerate() {
        m.set_column(j, q);
    }
    m
}

/// Euclidean minimum-norm solution of a consistent system `A y = b`.
pub fn least_squares_min_norm(a: &RealMatrix, b: &RealVector) -> Result<RealVector, NumError> {
    if a.nrows() != b.len() {
        return Err(NumError::DimensionMismatch(format!(
            "matrix has {} rows, rhs has {}",
            a.nrows(),
            b.len()
        )));
    }
    check_finite(a)?;
    if !b.iter().all(|v| v.is_finite()) {
        return Err(NumError::NonFinite);
    }
    let n = a.ncols();
    if a.nrows() == 0 {
        return Ok(DVector::zeros(n));
    }
    let amax = max_abs(a);
    let x = if amax == 0.0 {
        DVector::zeros(n)
    } else {
        let svd = a.clone().svd(true, true);
        let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
        svd.solve(b, tolerances().rank * smax)
            .map_err(|e| NumError::NumericalBreakdown(e.to_string()))?
    };
    let resid = (a * &x - b).amax();
    let scale = 1.0f64.max(b.amax()).max(amax * x.amax());
    if resid > tolerances().feas * scale {
        return Err(NumError::Inconsistent(resid));
    }
    Ok(x)
}

/// Solve a square system, `None` when it is numerically singular.
pub fn solve_square(a: &RealMatrix, b: &RealVector) -> Option<RealVector> {
    let lu = a.clone().full_piv_lu();
    let x = lu.solve(b)?;
    if x.iter().all(|v| v.is_finite()) {
        Some(x)
    } else {
        None
    }
}
