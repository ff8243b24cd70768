use std::sync::RwLock;

/// Global numerical tolerances. Defaults are the values every test in the
/// workspace is calibrated against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Constraint violation accepted for a point to count as feasible.
    pub feas: f64,
    /// Accuracy of optimal objective values.
    pub obj: f64,
    /// Smallest acceptable simplex pivot.
    pub pivot: f64,
    /// Relative threshold for numerical rank.
    pub rank: f64,
    /// Accuracy target of iterative (non-LP) optimizers.
    pub opt: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            feas: 1e-9,
            obj: 1e-8,
            pivot: 1e-11,
            rank: 1e-10,
            opt: 1e-6,
        }
    }
}

static TOL: RwLock<Tolerances> = RwLock::new(Tolerances {
    feas: 1e-9,
    obj: 1e-8,
    pivot: 1e-11,
    rank: 1e-10,
    opt: 1e-6,
});

pub fn tolerances() -> Tolerances {
    *TOL.read().unwrap_or_else(|e| e.into_inner())
}

/// Replace the process-wide tolerances. Intended for configuration at
/// start-up, not for toggling mid-computation.
pub fn set_tolerances(t: Tolerances) {
    *TOL.write().unwrap_or_else(|e| e.into_inner()) = t;
}
