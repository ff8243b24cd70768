//! Agent policies: IUCB for imprecise bandits plus UCB, Confidence Ball and
//! Game UCB. All of them implement [`AgentPolicy`], which alternates
//! `select_arm` and `observe` after a `reset`.

mod cb;
mod dz;
mod error;
mod gucb;
mod iucb;
mod ucb;

pub use cb::{barycentric_spanner, ConfidenceBall};
pub use dz::{dz_bounds, dz_distance, DzBounds};
pub use error::{AgentError, Result};
pub use gucb::GameUcb;
pub use iucb::{default_eta, optimistic_hypothesis, CycleRecord, Iucb, IucbParams, IucbTrace};
pub use ucb::Ucb;

use ib_model::Scenario;

pub trait AgentPolicy: Send {
    fn reset(&mut self, sc: &Scenario, horizon: usize, seed: u64) -> Result<()>;
    fn select_arm(&mut self) -> Result<usize>;
    /// Feed back the outcome of the arm returned by the last `select_arm`.
    fn observe(&mut self, y: &[f64]) -> Result<()>;
    fn name(&self) -> &str;

    /// Conditions worth recording next to a trace.
    fn flags(&self) -> Vec<String> {
        Vec::new()
    }

    fn iucb_trace(&self) -> Option<&IucbTrace> {
        None
    }
}

/// Tracks the select/observe alternation shared by every policy.
#[derive(Debug, Clone, Default)]
pub(crate) struct Turn {
    pending: Option<usize>,
}

impl Turn {
    pub(crate) fn select(&mut self, arm: usize) -> Result<usize> {
        if self.pending.is_some() {
            return Err(AgentError::Protocol("select_arm called twice".into()));
        }
        self.pending = Some(arm);
        Ok(arm)
    }

    pub(crate) fn observe(&mut self) -> Result<usize> {
        self.pending
            .take()
            .ok_or_else(|| AgentError::Protocol("observe without a selected arm".into()))
    }

    pub(crate) fn clear(&mut self) {
        self.pending = None;
    }
}

pub(crate) fn argmax_first(v: impl IntoIterator<Item = f64>) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, x) in v.into_iter().enumerate() {
        if x > best.1 {
            best = (i, x);
        }
    }
    best.0
}
