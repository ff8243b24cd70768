//! Norms on `W` and `Z̄`, the certificates `R`, `S`, `C` and gap, and the
//! regret-bound evaluators.

mod bounds;
mod error;
mod params;
mod report;
mod restrict;
mod wnorm;
mod zbar;

pub use bounds::{
    bound_gap, bound_main, bound_simplex, delta_default, eta_main, eta_simplex, gamma, BoundDims,
    CertValues,
};
pub use error::{CertError, Result};
pub use params::{
    gap_compute, param_c, param_r, param_s, resolve_sine_method, ChainComponent, SineChart,
    SineMethod, SineReport,
};
pub use report::{certify, BoundEntry, CertificateReport, CertifyOptions};
pub use restrict::restrict_to_span;
pub use wnorm::{w_norm, w_norm_primal, WNorm};
pub use zbar::{build_zbar, ZBar};
