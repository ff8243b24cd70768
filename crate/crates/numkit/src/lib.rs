//! Dense numerics used by every other crate in the workspace.
//!
//! Everything here works on small dense problems (tens of variables), so
//! the algorithms favour robustness over asymptotic speed: Gauss-Jordan
//! elimination with column pivoting for rank and kernels, an SVD for the
//! minimum-norm least-squares solution, and a two-phase tableau simplex.

mod builder;
mod error;
mod linalg;
mod lp;
mod tol;

pub use builder::{LinExpr, LpBuilder};
pub use error::NumError;
pub use linalg::{
    kernel_basis, least_squares_min_norm, mat_from_rows, orthonormalize, rank, rref, solve_square,
    RealMatrix, RealVector, Rref,
};
pub use lp::{lp_solve, LpProblem, LpSolution, LpStatus, Sense};
pub use tol::{set_tolerances, tolerances, Tolerances};
