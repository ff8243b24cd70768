//! Norms, convex bodies, distances and subspace sines.

mod affine;
mod body;
mod dist;
mod error;
pub mod norm;
mod sine;

pub use affine::AffineSubspace;
pub use body::{ConvexBody, Section};
pub use dist::{dist_between_convex, dist_point_to_affine, l1_dist_to_simplex, min_norm_on_affine};
pub use error::{GeomError, Result};
pub use norm::{
    add_norm_epigraph, minimize_norm, norm_eval, norm_subgradient, NormBlock, NormSpec,
};
pub use sine::{
    sine_ball, sine_bruteforce, sine_bruteforce_subspace, sine_chain, sine_principal_angles,
    sine_prob_system, sine_simplex_lb, DEFAULT_SINE_SAMPLES,
};
