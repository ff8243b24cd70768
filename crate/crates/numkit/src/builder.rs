use crate::{lp_solve, LpProblem, LpSolution, NumError, Sense};

/// A sparse linear expression `sum coef * var + constant`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LinExpr {
    pub terms: Vec<(usize, f64)>,
    pub constant: f64,
}

impl LinExpr {
    pub fn constant(c: f64) -> Self {
        LinExpr {
            terms: Vec::new(),
            constant: c,
        }
    }

    pub fn var(v: usize) -> Self {
        LinExpr {
            terms: vec![(v, 1.0)],
            constant: 0.0,
        }
    }

    pub fn add_term(&mut self, v: usize, c: f64) -> &mut Self {
        if c != 0.0 {
            self.terms.push((v, c));
        }
        self
    }

    pub fn add_scaled(&mut self, other: &LinExpr, s: f64) -> &mut Self {
        for &(v, c) in &other.terms {
            self.add_term(v, s * c);
        }
        self.constant += s * other.constant;
        self
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.constant + self.terms.iter().map(|&(v, c)| c * x[v]).sum::<f64>()
    }
}

/// Incremental construction of an `LpProblem` when the number of variables
/// is not known up front.
#[derive(Debug, Clone, Default)]
pub struct LpBuilder {
    lower: Vec<Option<f64>>,
    objective: Vec<(usize, f64)>,
    eqs: Vec<LinExpr>,
    ubs: Vec<LinExpr>,
}

impl LpBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn num_vars(&self) -> usize {
        self.lower.len()
    }

    /// A variable bounded below by zero.
    pub fn nonneg(&mut self) -> usize {
        self.lower.push(Some(0.0));
        self.lower.len() - 1
    }

    pub fn free(&mut self) -> usize {
        self.lower.push(None);
        self.lower.len() - 1
    }

    pub fn nonnegs(&mut self, n: usize) -> Vec<usize> {
        (0..n).map(|_| self.nonneg()).collect()
    }

    pub fn frees(&mut self, n: usize) -> Vec<usize> {
        (0..n).map(|_| self.free()).collect()
    }

    pub fn objective(&mut self, v: usize, c: f64) -> &mut Self {
        self.objective.push((v, c));
        self
    }

    /// `expr == 0`
    pub fn eq_zero(&mut self, e: LinExpr) -> &mut Self {
        self.eqs.push(e);
        self
    }

    /// `expr <= 0`
    pub fn le_zero(&mut self, e: LinExpr) -> &mut Self {
        self.ubs.push(e);
        self
    }

    fn dense(&self, e: &LinExpr) -> (Vec<f64>, f64) {
        let mut row = vec![0.0; self.num_vars()];
        for &(v, c) in &e.terms {
            row[v] += c;
        }
        (row, -e.constant)
    }

    pub fn to_problem(&self, sense: Sense) -> LpProblem {
        let mut obj = vec![0.0; self.num_vars()];
        for &(v, c) in &self.objective {
            obj[v] += c;
        }
        let mut p = LpProblem::new(sense, obj);
        p.lower = self.lower.clone();
        for e in &self.eqs {
            let (r, b) = self.dense(e);
            p.eq(r, b);
        }
        for e in &self.ubs {
            let (r, b) = self.dense(e);
            p.leq(r, b);
        }
        p
    }

    pub fn solve(&self, sense: Sense) -> Result<LpSolution, NumError> {
        lp_solve(&self.to_problem(sense))
    }
}
