use ib_model::Scenario;
use serde::{Deserialize, Serialize};

use crate::{NaturePolicy, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArmAudit {
    pub arm: usize,
    pub samples: usize,
    /// `F_{xθ*}` applied to the empirical mean, per constraint.
    pub constraint_mean: Vec<f64>,
    /// Standard error of each entry of `constraint_mean`.
    pub std_error: Vec<f64>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub arms: Vec<ArmAudit>,
    pub passed: bool,
}

/// Pull every arm `samples` times from a fresh reset (seed `seed + arm`)
/// and test `F_{xθ*}(mean) = 0` with a `z_score`-sigma band plus `tol`.
pub fn compatibility_audit(
    nature: &mut dyn NaturePolicy,
    sc: &Scenario,
    theta: usize,
    samples: usize,
    z_score: f64,
    tol: f64,
    seed: u64,
) -> Result<AuditReport> {
    let mut arms = Vec::new();
    for x in 0..sc.family.num_arms() {
        nature.reset(sc, theta, seed.wrapping_add(x as u64))?;
        let f = sc.family.f_matrix(x, theta)?;
        let dw = f.nrows();
        let (mut sum, mut sq) = (vec![0.0; dw], vec![0.0; dw]);
        for _ in 0..samples {
            let y = nature.respond(x)?;
            for w in 0..dw {
                let v: f64 = (0..f.ncols()).map(|j| f[(w, j)] * y[j]).sum();
                sum[w] += v;
                sq[w] += v * v;
            }
        }
        let n = samples.max(1) as f64;
        let mean: Vec<f64> = sum.iter().map(|s| s / n).collect();
        let se: Vec<f64> = sq
            .iter()
            .zip(&mean)
            .map(|(q, m)| ((q / n - m * m).max(0.0) * n / (n - 1.0).max(1.0)).sqrt() / n.sqrt())
            .collect();
        let passed = mean
            .iter()
            .zip(&se)
            .all(|(m, s)| m.abs() <= z_score * s + tol);
        arms.push(ArmAudit {
            arm: x,
            samples,
            constraint_mean: mean,
            std_error: se,
            passed,
        });
    }
    let passed = arms.iter().all(|a| a.passed);
    Ok(AuditReport { arms, passed })
}
