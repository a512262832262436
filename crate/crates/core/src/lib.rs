//! Covariance-matrix entanglement criteria for multipartite states.
//!
//! The crate builds states (GHZ, W, Schmidt-form, thermal, graph), computes
//! their covariance matrices in local orthonormal observable bases, and runs
//! the analytic three-qubit test, the SDP-based criterion, spin-squeezing
//! inequalities and the negativity on them.

// Parameter checks are written `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cmc;
pub mod covariance;
pub mod error;
pub mod graphmimic;
pub mod io;
pub mod linalg;
pub mod pauli;
pub mod states;
pub mod witnesses;

pub use error::{Error, Result};
pub use nalgebra;
