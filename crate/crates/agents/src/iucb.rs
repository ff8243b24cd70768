use std::sync::Arc;

use ib_certificates::{
    eta_main, eta_simplex, param_c, param_r, restrict_to_span, BoundDims, CertValues, ZBar,
};
use ib_model::{OutcomeSpace, Scenario};
use serde::{Deserialize, Serialize};

use crate::dz::dz_bounds;
use crate::{AgentError, AgentPolicy, Result, Turn};

/// Slack for deciding that an outcome lies in the body.
const FEAS_TOL: f64 = 1e-6;
/// Accuracy requested from the distance solver.
const DZ_TOL: f64 = 1e-9;
const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IucbParams {
    /// Fixed `η`; when absent the recommended value for the horizon is used.
    pub eta: Option<f64>,
    /// The free constant in the general recommendation.
    pub eta_scale: f64,
    /// Run on `span(H)` rather than the declared `Z`.
    pub restrict_span: bool,
}

impl Default for IucbParams {
    fn default() -> Self {
        IucbParams {
            eta: None,
            eta_scale: 1.0,
            restrict_span: true,
        }
    }
}

/// One confidence-set update.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleRecord {
    /// Round (1-based) whose observation ended the cycle.
    pub round: usize,
    pub tau: usize,
    /// `max_{θ in C} dz` at the end of the cycle.
    pub rho: f64,
    /// `2 (D_Z + 1) η`.
    pub threshold: f64,
    /// `max dz` over the survivors, or 0 when none survive.
    pub max_survivor_dz: f64,
    pub before: Vec<usize>,
    pub after: Vec<usize>,
    pub theta_star: usize,
    pub arm: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IucbTrace {
    pub eta: f64,
    pub d_z: usize,
    pub initial: Vec<usize>,
    pub cycles: Vec<CycleRecord>,
    /// Set once the confidence set empties; the agent then keeps its last arm.
    pub eliminated: bool,
}

/// Everything that depends only on the scenario and horizon.
#[derive(Debug)]
struct Setup {
    key: (String, usize, usize, usize),
    zb: ZBar,
    opt: Vec<(usize, f64)>,
    eta: f64,
    d_z: usize,
    mu: Vec<f64>,
    mu_sq: f64,
    space: OutcomeSpace,
}

fn scenario_key(sc: &Scenario, horizon: usize) -> (String, usize, usize, usize) {
    (
        sc.name.clone(),
        horizon,
        sc.family.num_arms(),
        sc.family.num_hypotheses(),
    )
}

fn build_zbar(sc: &Scenario, restrict: bool) -> Result<ZBar> {
    let fam = if restrict {
        restrict_to_span(&sc.family).0
    } else {
        sc.family.clone()
    };
    Ok(ZBar::build(&fam, &sc.space)?)
}

fn eta_for(sc: &Scenario, zb: &ZBar, horizon: usize, scale: f64) -> Result<f64> {
    let cert = CertValues {
        r: param_r(zb)?,
        s: 1.0,
        c: param_c(&sc.reward, &sc.space)?,
    };
    let dims = BoundDims {
        d_z: zb.d_z(),
        d_w: zb.dim_w,
    };
    Ok(if sc.space.is_simplex() {
        eta_simplex(&cert, &dims, horizon, sc.space.dim)
    } else {
        eta_main(&cert, &dims, horizon, scale)
    })
}

/// Recommended `η` at horizon `horizon`: the simplex-bound value on simplex
/// bodies, otherwise `scale · R · D_W^{5/6} · sqrt(ln(C D_W N))`.
pub fn default_eta(sc: &Scenario, horizon: usize, scale: f64) -> Result<f64> {
    let zb = build_zbar(sc, true)?;
    eta_for(sc, &zb, horizon, scale)
}

fn optimistic_cached(c: &[usize], opt: &[(usize, f64)]) -> Result<(usize, usize, f64)> {
    let mut best: Option<(usize, usize, f64)> = None;
    for &t in c {
        let (arm, v) = opt[t];
        if best.map_or(true, |b| v > b.2 + TIE_TOL) {
            best = Some((t, arm, v));
        }
    }
    best.ok_or(AgentError::EmptyConfidenceSet)
}

/// `argmax_{θ in C} max_x ME_θ(x)`, ties to the lowest hypothesis index.
/// Returns the hypothesis, its optimal arm and the value.
pub fn optimistic_hypothesis(sc: &Scenario, c: &[usize]) -> Result<(usize, usize, f64)> {
    let mut sorted = c.to_vec();
    sorted.sort_unstable();
    let mut opt = vec![(0, f64::NEG_INFINITY); sc.family.num_hypotheses()];
    for &t in &sorted {
        opt[t] = sc.optimal_arm(t)?;
    }
    optimistic_cached(&sorted, &opt)
}

/// Imprecise UCB. Plays the optimal arm of the optimistic hypothesis until
/// the running mean outcome is far enough from every surviving hypothesis'
/// kernel, then shrinks the confidence set and restarts the cycle.
#[derive(Debug, Clone)]
pub struct Iucb {
    params: IucbParams,
    setup: Option<Arc<Setup>>,
    c: Vec<usize>,
    theta_star: usize,
    arm_star: usize,
    tau: usize,
    sum_y: Vec<f64>,
    round: usize,
    trace: IucbTrace,
    turn: Turn,
}

impl Iucb {
    pub fn new(params: IucbParams) -> Result<Self> {
        if let Some(e) = params.eta {
            if !(e > 0.0 && e.is_finite()) {
                return Err(AgentError::InvalidParameter("eta must be positive".into()));
            }
        }
        if !(params.eta_scale > 0.0) {
            return Err(AgentError::InvalidParameter(
                "eta_scale must be positive".into(),
            ));
        }
        Ok(Iucb {
            params,
            setup: None,
            c: Vec::new(),
            theta_star: 0,
            arm_star: 0,
            tau: 0,
            sum_y: Vec::new(),
            round: 0,
            trace: IucbTrace::default(),
            turn: Turn::default(),
        })
    }

    pub fn trace(&self) -> &IucbTrace {
        &self.trace
    }

    pub fn confidence_set(&self) -> &[usize] {
        &self.c
    }

    pub fn theta_star(&self) -> usize {
        self.theta_star
    }

    pub fn eta(&self) -> Option<f64> {
        self.setup.as_ref().map(|s| s.eta)
    }

    pub fn d_z(&self) -> Option<usize> {
        self.setup.as_ref().map(|s| s.d_z)
    }

    pub fn zbar(&self) -> Option<&ZBar> {
        self.setup.as_ref().map(|s| &s.zb)
    }

    /// Rounds into the current cycle.
    pub fn tau(&self) -> usize {
        self.tau
    }

    fn prepare(&mut self, sc: &Scenario, horizon: usize) -> Result<()> {
        let key = scenario_key(sc, horizon);
        if self.setup.as_ref().is_some_and(|s| s.key == key) {
            return Ok(());
        }
        let zb = build_zbar(sc, self.params.restrict_span)?;
        let eta = match self.params.eta {
            Some(e) => e,
            None => eta_for(sc, &zb, horizon, self.params.eta_scale)?,
        };
        let mu = sc.space.mu.clone();
        let mu_sq = mu.iter().map(|v| v * v).sum();
        self.setup = Some(Arc::new(Setup {
            key,
            d_z: zb.d_z(),
            zb,
            opt: sc.optimal_arms()?,
            eta,
            mu,
            mu_sq,
            space: sc.space.clone(),
        }));
        Ok(())
    }

    /// Running mean projected back onto `μ(y) = 1`.
    fn mean_outcome(&self, s: &Setup) -> Vec<f64> {
        let mut y: Vec<f64> = self.sum_y.iter().map(|v| v / self.tau as f64).collect();
        let m: f64 = y.iter().zip(&s.mu).map(|(a, b)| a * b).sum();
        for (v, u) in y.iter_mut().zip(&s.mu) {
            *v += (1.0 - m) * u / s.mu_sq;
        }
        y
    }
}

impl AgentPolicy for Iucb {
    fn reset(&mut self, sc: &Scenario, horizon: usize, _seed: u64) -> Result<()> {
        self.prepare(sc, horizon)?;
        let s = self.setup.clone().ok_or(AgentError::NotReset)?;
        self.c = (0..sc.family.num_hypotheses()).collect();
        let (t, arm, _) = optimistic_cached(&self.c, &s.opt)?;
        self.theta_star = t;
        self.arm_star = arm;
        self.tau = 0;
        self.sum_y = vec![0.0; sc.space.dim];
        self.round = 0;
        self.trace = IucbTrace {
            eta: s.eta,
            d_z: s.d_z,
            initial: self.c.clone(),
            cycles: Vec::new(),
            eliminated: false,
        };
        self.turn.clear();
        Ok(())
    }

    fn select_arm(&mut self) -> Result<usize> {
        if self.setup.is_none() {
            return Err(AgentError::NotReset);
        }
        self.turn.select(self.arm_star)
    }

    fn observe(&mut self, y: &[f64]) -> Result<()> {
        let x = self.turn.observe()?;
        let s = self.setup.clone().ok_or(AgentError::NotReset)?;
        if y.len() != self.sum_y.len() || !s.space.body.contains(y, FEAS_TOL) {
            return Err(AgentError::OutcomeOutsideBody { arm: x });
        }
        self.round += 1;
        self.tau += 1;
        for (a, b) in self.sum_y.iter_mut().zip(y) {
            *a += b;
        }
        if self.trace.eliminated {
            return Ok(());
        }
        let ybar = self.mean_outcome(&s);
        let sq = (self.tau as f64).sqrt();
        let threshold = 2.0 * (s.d_z as f64 + 1.0) * s.eta;
        let fam = s.zb.family();

        // dz <= ‖F(x, θ, ȳ)‖_W, so hypotheses below the threshold by that
        // bound cannot end the cycle and need no distance computation.
        let mut cand = Vec::new();
        for &t in &self.c {
            let ub = s.zb.w_norm.eval(&fam.apply(x, fam.theta(t)?, &ybar)?);
            if sq * ub >= threshold {
                cand.push((t, ub));
            }
        }
        if cand.is_empty() {
            return Ok(());
        }
        cand.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        let mut dist = vec![None; fam.num_hypotheses()];
        let mut ended = false;
        for &(t, _) in &cand {
            let d = dz_bounds(&s.zb, fam.theta(t)?, x, &ybar, DZ_TOL)?;
            dist[t] = Some(d);
            if sq * d.upper >= threshold {
                ended = true;
                break;
            }
        }
        if !ended {
            return Ok(());
        }

        let radius = s.eta / sq;
        let mut rho = 0.0f64;
        let mut after = Vec::new();
        let mut max_survivor = 0.0f64;
        for &t in &self.c {
            let d = match dist[t] {
                Some(d) => d,
                None => dz_bounds(&s.zb, fam.theta(t)?, x, &ybar, DZ_TOL)?,
            };
            rho = rho.max(d.upper);
            if d.lower <= radius {
                after.push(t);
                max_survivor = max_survivor.max(d.upper);
            }
        }
        let before = std::mem::replace(&mut self.c, after.clone());
        if after.is_empty() {
            self.trace.eliminated = true;
        } else {
            let (t, arm, _) = optimistic_cached(&self.c, &s.opt)?;
            self.theta_star = t;
            self.arm_star = arm;
        }
        self.trace.cycles.push(CycleRecord {
            round: self.round,
            tau: self.tau,
            rho,
            threshold,
            max_survivor_dz: max_survivor,
            before,
            after,
            theta_star: self.theta_star,
            arm: self.arm_star,
        });
        self.tau = 0;
        self.sum_y.iter_mut().for_each(|v| *v = 0.0);
        Ok(())
    }

    fn name(&self) -> &str {
        "iucb"
    }

    fn flags(&self) -> Vec<String> {
        if self.trace.eliminated {
            vec!["confidence_set_emptied".into()]
        } else {
            Vec::new()
        }
    }

    fn iucb_trace(&self) -> Option<&IucbTrace> {
        Some(&self.trace)
    }
}
