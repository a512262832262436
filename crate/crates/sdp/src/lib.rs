//! Dense semidefinite programming for small block-diagonal LMI problems.
//!
//! [`solve`] runs a primal-dual interior-point method; [`bisection_oracle`]
//! answers the same question for single-variable objectives by an
//! unrelated route (bisection over barrier-method feasibility checks) and
//! is meant for cross-checking.

// Parameter checks are written `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod dense;
pub mod dump;
mod error;
mod oracle;
mod problem;
mod solver;

pub use error::{Result, SdpError};
pub use oracle::{bisection_oracle, BRACKET_LOWER, BRACKET_UPPER};
pub use problem::{SdpProblem, SymEntry};
pub use solver::{
    solve, solve_with, SdpSolution, SdpStatus, SolverOptions, DEFAULT_MAX_ITERATIONS, DEFAULT_STEP_DAMPING,
    STALL_WINDOW,
};
