use ib_numkit::{LinExpr, LpBuilder, Sense};

use crate::{ModelError, Result};

/// Convex envelope of a reward given at polytope vertices: the least
/// mixture value `sum ζ_v r_v` over distributions `ζ` with mean `y`.
#[derive(Debug, Clone)]
pub struct ConvexifiedReward {
    pub vertices: Vec<Vec<f64>>,
    pub values: Vec<f64>,
}

impl ConvexifiedReward {
    pub fn new(vertices: Vec<Vec<f64>>, values: Vec<f64>) -> Result<Self> {
        if vertices.len() != values.len() || vertices.is_empty() {
            return Err(ModelError::InvalidScenario(
                "one reward value per vertex".into(),
            ));
        }
        Ok(ConvexifiedReward { vertices, values })
    }

    pub fn eval(&self, y: &[f64]) -> Result<f64> {
        let mut lp = LpBuilder::new();
        let z = lp.nonnegs(self.vertices.len());
        for (k, &zk) in z.iter().enumerate() {
            lp.objective(zk, self.values[k]);
        }
        let mut sum = LinExpr::constant(-1.0);
        for &zk in &z {
            sum.add_term(zk, 1.0);
        }
        lp.eq_zero(sum);
        for (i, yi) in y.iter().enumerate() {
            let mut e = LinExpr::constant(-yi);
            for (k, v) in self.vertices.iter().enumerate() {
                e.add_term(z[k], v[i]);
            }
            lp.eq_zero(e);
        }
        let s = lp.solve(Sense::Minimize)?;
        if !s.is_optimal() {
            return Err(ModelError::QueryOutsideBody);
        }
        Ok(s.value)
    }
}
