use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use ib_model::Scenario;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{
    regret_trace, run_episode, AgentFactory, NatureSpec, RegretRecord, Result, SimError, Trace,
};

/// Per-round mean and sample standard deviation of cumulative regret.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
    /// Episodes that reached each round (fewer than `reps` only after errors).
    pub count: Vec<usize>,
    pub reps: usize,
}

impl Summary {
    fn from_curves(curves: &[&[f64]], horizon: usize) -> Self {
        let mut mean = Vec::with_capacity(horizon);
        let mut std = Vec::with_capacity(horizon);
        let mut count = Vec::with_capacity(horizon);
        for n in 0..horizon {
            // Fixed summation order (rep index) keeps the output bit-stable
            // whatever the thread schedule was.
            let vals: Vec<f64> = curves.iter().filter_map(|c| c.get(n).copied()).collect();
            let k = vals.len();
            let m = if k > 0 {
                vals.iter().sum::<f64>() / k as f64
            } else {
                f64::NAN
            };
            let constant = vals.iter().all(|v| *v == vals[0]);
            let s = if k > 1 && !constant {
                (vals.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (k - 1) as f64).sqrt()
            } else {
                0.0
            };
            mean.push(m);
            std.push(s);
            count.push(k);
        }
        Summary {
            mean,
            std,
            count,
            reps: curves.len(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("round,mean_regret,std_regret,reps\n");
        for n in 0..self.mean.len() {
            let _ = writeln!(
                s,
                "{},{},{},{}",
                n + 1,
                self.mean[n],
                self.std[n],
                self.count[n]
            );
        }
        s
    }
}

#[derive(Debug, Clone)]
pub struct McOutput {
    pub traces: Vec<Trace>,
    pub regrets: Vec<RegretRecord>,
    pub summary: Summary,
}

impl McOutput {
    /// Per-rep CSV with header `round,arm,reward,cum_regret`.
    pub fn rep_csv(&self, rep: usize) -> String {
        let t = &self.traces[rep];
        let r = &self.regrets[rep];
        let mut s = String::from("round,arm,reward,cum_regret\n");
        for n in 0..t.len() {
            let _ = writeln!(
                s,
                "{},{},{},{}",
                n + 1,
                t.arms[n],
                t.rewards[n],
                r.cumulative[n]
            );
        }
        s
    }

    pub fn errors(&self) -> Vec<(usize, &str)> {
        self.traces
            .iter()
            .enumerate()
            .filter_map(|(i, t)| t.error.as_deref().map(|e| (i, e)))
            .collect()
    }
}

/// Run `reps` episodes with seeds `seed + rep`, in parallel, and aggregate
/// their regret curves in rep order.
pub fn monte_carlo(
    sc: &Scenario,
    agent: &AgentFactory,
    nature: &NatureSpec,
    theta: usize,
    horizon: usize,
    reps: usize,
    seed: u64,
) -> Result<McOutput> {
    if reps == 0 {
        return Err(SimError::InvalidParameter("reps must be at least 1".into()));
    }
    if theta >= sc.family.num_hypotheses() {
        return Err(SimError::InvalidParameter(format!(
            "theta {theta} is not on the hypothesis grid"
        )));
    }
    nature.make()?;
    let traces: Vec<Trace> = (0..reps as u64)
        .into_par_iter()
        .map(|r| {
            let mut a = agent.make();
            let mut n = nature.make()?;
            run_episode(
                a.as_mut(),
                n.as_mut(),
                sc,
                theta,
                horizon,
                seed.wrapping_add(r),
            )
        })
        .collect::<Result<_>>()?;
    let regrets: Vec<RegretRecord> = traces
        .iter()
        .map(|t| regret_trace(t, sc, theta))
        .collect::<Result<_>>()?;
    let curves: Vec<&[f64]> = regrets.iter().map(|r| r.cumulative.as_slice()).collect();
    let summary = Summary::from_curves(&curves, horizon);
    Ok(McOutput {
        traces,
        regrets,
        summary,
    })
}

fn write(path: PathBuf, body: &str) -> Result<PathBuf> {
    std::fs::write(&path, body).map_err(|source| SimError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(path)
}

/// Write `rep_XXXX.csv` per episode plus `summary.csv` into `dir`.
pub fn write_outputs(out: &McOutput, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|source| SimError::Io {
        path: dir.display().to_string(),
        source,
    })?;
    let mut paths = Vec::new();
    for rep in 0..out.traces.len() {
        paths.push(write(
            dir.join(format!("rep_{rep:04}.csv")),
            &out.rep_csv(rep),
        )?);
    }
    paths.push(write(dir.join("summary.csv"), &out.summary.to_csv())?);
    Ok(paths)
}
