use ib_numkit::{LinExpr, LpBuilder, Sense};

use crate::Result;

/// Value and a maximin strategy of the matrix game where the row player
/// receives `p[a][b]`.
pub fn game_value(p: &[Vec<f64>]) -> Result<(f64, Vec<f64>)> {
    let rows = p.len();
    let cols = p.first().map_or(0, |r| r.len());
    let mut lp = LpBuilder::new();
    let x = lp.nonnegs(rows);
    let v = lp.free();
    lp.objective(v, 1.0);
    let mut sum = LinExpr::constant(-1.0);
    for &xi in &x {
        sum.add_term(xi, 1.0);
    }
    lp.eq_zero(sum);
    for b in 0..cols {
        let mut e = LinExpr::var(v);
        for a in 0..rows {
            e.add_term(x[a], -p[a][b]);
        }
        lp.le_zero(e);
    }
    let s = lp.solve(Sense::Maximize)?;
    Ok((s.value, x.iter().map(|&i| s.point[i]).collect()))
}
