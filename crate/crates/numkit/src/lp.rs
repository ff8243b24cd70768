use nalgebra::{DMatrix, DVector};

use crate::{tolerances, NumError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

/// `opt objective·x  s.t.  a_eq x = b_eq,  a_ub x <= b_ub,  x_j >= lower_j`.
///
/// A `None` lower bound makes the variable free. New problems start with
/// every variable bounded below by zero.
#[derive(Debug, Clone)]
pub struct LpProblem {
    pub sense: Sense,
    pub objective: Vec<f64>,
    pub a_eq: Vec<Vec<f64>>,
    pub b_eq: Vec<f64>,
    pub a_ub: Vec<Vec<f64>>,
    pub b_ub: Vec<f64>,
    pub lower: Vec<Option<f64>>,
}

impl LpProblem {
    pub fn new(sense: Sense, objective: Vec<f64>) -> Self {
        let n = objective.len();
        LpProblem {
            sense,
            objective,
            a_eq: Vec::new(),
            b_eq: Vec::new(),
            a_ub: Vec::new(),
            b_ub: Vec::new(),
            lower: vec![Some(0.0); n],
        }
    }

    pub fn minimize(objective: Vec<f64>) -> Self {
        Self::new(Sense::Minimize, objective)
    }

    pub fn maximize(objective: Vec<f64>) -> Self {
        Self::new(Sense::Maximize, objective)
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn eq(&mut self, row: Vec<f64>, rhs: f64) -> &mut Self {
        self.a_eq.push(row);
        self.b_eq.push(rhs);
        self
    }

    pub fn leq(&mut self, row: Vec<f64>, rhs: f64) -> &mut Self {
        self.a_ub.push(row);
        self.b_ub.push(rhs);
        self
    }

    pub fn geq(&mut self, row: Vec<f64>, rhs: f64) -> &mut Self {
        self.a_ub.push(row.into_iter().map(|v| -v).collect());
        self.b_ub.push(-rhs);
        self
    }

    pub fn set_free(&mut self, j: usize) -> &mut Self {
        self.lower[j] = None;
        self
    }

    pub fn set_lower(&mut self, j: usize, l: f64) -> &mut Self {
        self.lower[j] = Some(l);
        self
    }

    fn validate(&self) -> Result<(), NumError> {
        let n = self.objective.len();
        let bad = |what: &str, i: usize, len: usize| {
            Err(NumError::DimensionMismatch(format!(
                "{what} row {i} has {len} columns, expected {n}"
            )))
        };
        if self.a_eq.len() != self.b_eq.len() || self.a_ub.len() != self.b_ub.len() {
            return Err(NumError::DimensionMismatch("constraint/rhs count".into()));
        }
        if self.lower.len() != n {
            return Err(NumError::DimensionMismatch("lower bound count".into()));
        }
        for (i, r) in self.a_eq.iter().enumerate() {
            if r.len() != n {
                return bad("equality", i, r.len());
            }
        }
        for (i, r) in self.a_ub.iter().enumerate() {
            if r.len() != n {
                return bad("inequality", i, r.len());
            }
        }
        let finite = self.objective.iter().all(|v| v.is_finite())
            && self.a_eq.iter().flatten().all(|v| v.is_finite())
            && self.a_ub.iter().flatten().all(|v| v.is_finite())
            && self.b_eq.iter().all(|v| v.is_finite())
            && self.b_ub.iter().all(|v| v.is_finite())
            && self.lower.iter().flatten().all(|v| v.is_finite());
        if !finite {
            return Err(NumError::NonFinite);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Optimal point when `status` is `Optimal`, empty otherwise.
    pub point: Vec<f64>,
    /// Objective value in the problem's own sense; NaN unless optimal.
    pub value: f64,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

const MAX_ITERS: usize = 50_000;
const DEGENERATE_BEFORE_BLAND: usize = 40;

struct Tableau {
    rows: usize,
    width: usize, // columns including rhs
    t: Vec<f64>,  // (rows + 1) x width, objective row last
    basis: Vec<usize>,
}

impl Tableau {
    #[inline]
    fn at(&self, r: usize, c: usize) -> f64 {
        self.t[r * self.width + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.width - 1)
    }

    fn pivot(&mut self, r: usize, e: usize) {
        let w = self.width;
        let p = self.t[r * w + e];
        for c in 0..w {
            self.t[r * w + c] /= p;
        }
        self.t[r * w + e] = 1.0;
        let (before, rest) = self.t.split_at_mut(r * w);
        let (prow, after) = rest.split_at_mut(w);
        for row in before.chunks_mut(w).chain(after.chunks_mut(w)) {
            let f = row[e];
            if f != 0.0 {
                for c in 0..w {
                    row[c] -= f * prow[c];
                }
                row[e] = 0.0;
            }
        }
        self.basis[r] = e;
    }

    /// Run primal simplex on columns `< allowed`. Returns false on unboundedness.
    fn run(&mut self, allowed: usize, rc_tol: f64) -> Result<bool, NumError> {
        let piv_eps = tolerances().pivot;
        let obj = self.rows;
        let mut bland = false;
        let mut degenerate = 0usize;
        for _ in 0..MAX_ITERS {
            let mut enter = None;
            let mut best = -rc_tol;
            for j in 0..allowed {
                let d = self.at(obj, j);
                if d < best {
                    enter = Some(j);
                    if bland {
                        break;
                    }
                    best = d;
                }
            }
            let Some(e) = enter else { return Ok(true) };
            let mut leave: Option<(usize, f64, f64)> = None;
            for r in 0..self.rows {
                let a = self.at(r, e);
                if a > piv_eps {
                    let ratio = self.rhs(r).max(0.0) / a;
                    leave = match leave {
                        None => Some((r, ratio, a)),
                        Some((lr, lratio, la)) => {
                            let tie = (ratio - lratio).abs() <= 1e-12 * (1.0 + lratio.abs());
                            let better = if tie {
                                if bland {
                                    self.basis[r] < self.basis[lr]
                                } else {
                                    a > la
                                }
                            } else {
                                ratio < lratio
                            };
                            if better {
                                Some((r, ratio, a))
                            } else {
                                Some((lr, lratio, la))
                            }
                        }
                    };
                }
            }
            let Some((r, ratio, _)) = leave else {
                return Ok(false);
            };
            if ratio <= 1e-12 {
                degenerate += 1;
                if degenerate > DEGENERATE_BEFORE_BLAND {
                    bland = true;
                }
            } else {
                degenerate = 0;
            }
            self.pivot(r, e);
        }
        Err(NumError::NumericalBreakdown(
            "simplex iteration limit reached".into(),
        ))
    }
}

/// Solve a linear program with a dense two-phase simplex. Pricing is
/// Dantzig's rule, switching to Bland's rule after a run of degenerate
/// pivots. The basic solution is re-solved from the original data at the
/// end so the returned point is accurate to roughly machine precision.
pub fn lp_solve(p: &LpProblem) -> Result<LpSolution, NumError> {
    p.validate()?;
    let tol = tolerances();
    let n = p.num_vars();

    // Standard-form columns: (original variable, sign).
    let mut cols: Vec<(usize, f64)> = Vec::with_capacity(n);
    let mut shift = vec![0.0; n];
    for j in 0..n {
        match p.lower[j] {
            Some(l) => {
                shift[j] = l;
                cols.push((j, 1.0));
            }
            None => {
                cols.push((j, 1.0));
                cols.push((j, -1.0));
            }
        }
    }
    let ns = cols.len();
    let m_eq = p.a_eq.len();
    let m_ub = p.a_ub.len();
    let m = m_eq + m_ub;
    let n_struct = ns + m_ub;

    // Dense standard-form rows with nonnegative rhs.
    let mut a_std = vec![vec![0.0; n_struct]; m];
    let mut b_std = vec![0.0; m];
    let mut slack_ok = vec![false; m];
    for i in 0..m {
        let (row, b) = if i < m_eq {
            (&p.a_eq[i], p.b_eq[i])
        } else {
            (&p.a_ub[i - m_eq], p.b_ub[i - m_eq])
        };
        let mut rhs = b;
        for j in 0..n {
            rhs -= row[j] * shift[j];
        }
        for (k, &(j, s)) in cols.iter().enumerate() {
            a_std[i][k] = s * row[j];
        }
        if i >= m_eq {
            a_std[i][ns + i - m_eq] = 1.0;
        }
        if rhs < 0.0 {
            for v in a_std[i].iter_mut() {
                *v = -*v;
            }
            rhs = -rhs;
        } else if i >= m_eq {
            slack_ok[i] = true;
        }
        b_std[i] = rhs;
    }

    let art_rows: Vec<usize> = (0..m).filter(|&i| !slack_ok[i]).collect();
    let n_art = art_rows.len();
    let width = n_struct + n_art + 1;
    let mut tab = Tableau {
        rows: m,
        width,
        t: vec![0.0; (m + 1) * width],
        basis: vec![0; m],
    };
    for i in 0..m {
        for k in 0..n_struct {
            tab.t[i * width + k] = a_std[i][k];
        }
        tab.t[i * width + width - 1] = b_std[i];
        if slack_ok[i] {
            tab.basis[i] = ns + i - m_eq;
        }
    }
    for (a, &i) in art_rows.iter().enumerate() {
        tab.t[i * width + n_struct + a] = 1.0;
        tab.basis[i] = n_struct + a;
    }

    let bscale = b_std.iter().fold(1.0f64, |a, &v| a.max(v.abs()));
    let mut removed = vec![false; m];
    if n_art > 0 {
        let obj = m * width;
        for &i in &art_rows {
            for c in 0..width {
                if c < n_struct || c == width - 1 {
                    tab.t[obj + c] -= tab.t[i * width + c];
                }
            }
        }
        tab.run(n_struct + n_art, 1e-12)?;
        let infeas = -tab.t[obj + width - 1];
        if infeas > tol.feas * bscale {
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                point: Vec::new(),
                value: f64::NAN,
            });
        }
        // Drive remaining artificials out of the basis; rows where that is
        // impossible are linearly dependent and get dropped.
        for r in 0..m {
            if tab.basis[r] >= n_struct {
                let mut best = (1e-9, None);
                for j in 0..n_struct {
                    let a = tab.at(r, j).abs();
                    if a > best.0 {
                        best = (a, Some(j));
                    }
                }
                match best.1 {
                    Some(j) => tab.pivot(r, j),
                    None => removed[r] = true,
                }
            }
        }
    }

    // Phase-two tableau over structural columns only.
    let keep: Vec<usize> = (0..m).filter(|&i| !removed[i]).collect();
    let m2 = keep.len();
    let w2 = n_struct + 1;
    let mut t2 = Tableau {
        rows: m2,
        width: w2,
        t: vec![0.0; (m2 + 1) * w2],
        basis: Vec::with_capacity(m2),
    };
    for (r2, &r) in keep.iter().enumerate() {
        for c in 0..n_struct {
            t2.t[r2 * w2 + c] = tab.at(r, c);
        }
        t2.t[r2 * w2 + n_struct] = tab.rhs(r);
        t2.basis.push(tab.basis[r]);
    }
    let sgn = if p.sense == Sense::Maximize {
        -1.0
    } else {
        1.0
    };
    let mut cost = vec![0.0; n_struct];
    for (k, &(j, s)) in cols.iter().enumerate() {
        cost[k] = sgn * s * p.objective[j];
    }
    let obj = m2 * w2;
    for c in 0..n_struct {
        t2.t[obj + c] = cost[c];
    }
    for r in 0..m2 {
        let cb = cost[t2.basis[r]];
        if cb != 0.0 {
            for c in 0..w2 {
                t2.t[obj + c] -= cb * t2.t[r * w2 + c];
            }
        }
    }
    let cscale = cost.iter().fold(1.0f64, |a, &v| a.max(v.abs()));
    if !t2.run(n_struct, 1e-10 * cscale)? {
        return Ok(LpSolution {
            status: LpStatus::Unbounded,
            point: Vec::new(),
            value: f64::NAN,
        });
    }

    // Re-solve the basic variables against the original rows.
    let mut x_std = vec![0.0; n_struct];
    for r in 0..m2 {
        x_std[t2.basis[r]] = t2.rhs(r).max(0.0);
    }
    if m2 > 0 {
        let bm = DMatrix::from_fn(m2, m2, |i, k| a_std[keep[i]][t2.basis[k]]);
        let bv = DVector::from_fn(m2, |i, _| b_std[keep[i]]);
        if let Some(xb) = bm.full_piv_lu().solve(&bv) {
            if xb.iter().all(|v| v.is_finite() && *v > -1e-7 * bscale) {
                for k in 0..m2 {
                    x_std[t2.basis[k]] = xb[k].max(0.0);
                }
            }
        }
    }
    let mut x = shift.clone();
    for (k, &(j, s)) in cols.iter().enumerate() {
        x[j] += s * x_std[k];
    }
    check_feasible(p, &x, tol.feas)?;
    let value = p.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    Ok(LpSolution {
        status: LpStatus::Optimal,
        point: x,
        value,
    })
}

fn check_feasible(p: &LpProblem, x: &[f64], feas: f64) -> Result<(), NumError> {
    let viol = |row: &[f64], b: f64| {
        let mut s = 0.0;
        let mut mag = b.abs().max(1.0);
        for (a, v) in row.iter().zip(x) {
            s += a * v;
            mag = mag.max((a * v).abs());
        }
        (s - b, mag)
    };
    for (row, &b) in p.a_eq.iter().zip(&p.b_eq) {
        let (d, mag) = viol(row, b);
        if d.abs() > feas * mag {
            return Err(NumError::NumericalBreakdown(format!(
                "equality residual {d:.3e}"
            )));
        }
    }
    for (row, &b) in p.a_ub.iter().zip(&p.b_ub) {
        let (d, mag) = viol(row, b);
        if d > feas * mag {
            return Err(NumError::NumericalBreakdown(format!(
                "inequality residual {d:.3e}"
            )));
        }
    }
    Ok(())
}
