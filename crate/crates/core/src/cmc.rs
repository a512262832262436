//! The multipartite covariance matrix criterion: the analytic 3×3 test for
//! three equal-dimension parties and the SDP test for qubits.
//!
//! A fully separable state has `γ ⪰ ⊕_α κ_α` for some single-party pure
//! state CMs `κ_α`. For qubits those are exactly the PSD 3×3 matrices with
//! unit trace (up to a factor ½ absorbed by the bound `γ ⪯ ½`), so the SDP
//! `max t s.t. γ − ⊕ Y_α ⪰ 0, Y_α ⪰ 0, Tr Y_α = t` decides the criterion:
//! the state violates it iff the optimum is below 1.

use entcov_sdp::{solve_with, SdpProblem, SdpStatus, SolverOptions};
use serde::{Deserialize, Serialize};

use crate::covariance::{standard_block_covariance, BlockCovarianceMatrix};
use crate::error::{Error, Result};
use crate::linalg::{real_symmetric_eigenvalues, DensityMatrix, RealMatrix, PSD_TOL};

/// Threshold on `λ_min` of the analytic test.
pub const PSD_DETECTION_TOL: f64 = 1e-9;
/// Margin below 1 that `t*` must clear to count as a detection.
pub const SDP_DETECTION_TOL: f64 = 1e-6;
/// Solver tolerance for CMC instances.
pub const SDP_SOLVER_TOL: f64 = 1e-9;

/// Keeps the diagonal of a 3×3 PSD matrix and replaces off-diagonals by
/// their absolute values. The result is again PSD.
pub fn abs_psd_3x3(eta: &RealMatrix) -> Result<RealMatrix> {
    if eta.nrows() != 3 || eta.ncols() != 3 {
        return Err(Error::DimensionMismatch(format!("{}x{} input, expected 3x3", eta.nrows(), eta.ncols())));
    }
    let asym = crate::linalg::asymmetry(eta);
    if asym > 1e-12 {
        return Err(Error::NotHermitian { deviation: asym });
    }
    let lmin = real_symmetric_eigenvalues(eta)[0];
    if lmin < PSD_TOL {
        return Err(Error::Precondition(format!("input has eigenvalue {lmin:e} < 0")));
    }
    Ok(RealMatrix::from_fn(3, 3, |r, c| if r == c { eta[(r, c)] } else { eta[(r, c)].abs() }))
}

/// The 3×3 matrix whose positivity is necessary for separability of three
/// `d`-level parties.
#[derive(Clone, Debug, PartialEq)]
pub struct Prop6Matrix {
    pub matrix: RealMatrix,
    pub d: usize,
}

impl Prop6Matrix {
    pub fn lambda_min(&self) -> f64 {
        real_symmetric_eigenvalues(&self.matrix)[0]
    }
}

pub fn prop6_matrix(bcm: &BlockCovarianceMatrix, d: usize) -> Result<Prop6Matrix> {
    if bcm.num_parties() != 3 {
        return Err(Error::Precondition(format!("analytic test needs 3 parties, got {}", bcm.num_parties())));
    }
    if bcm.local_dims().iter().any(|&x| x != d) {
        return Err(Error::Precondition(format!(
            "analytic test needs equal local dimension {d}, got {:?}",
            bcm.local_dims()
        )));
    }
    let shift = d as f64 - 1.0;
    let diag_abs_sum = |a: usize, b: usize| bcm.block(a, b).diagonal().iter().map(|x| x.abs()).sum::<f64>();
    let (sd, se, sf) = (diag_abs_sum(0, 1), diag_abs_sum(0, 2), diag_abs_sum(1, 2));
    let tr = |a: usize| bcm.block(a, a).trace() - shift;
    let matrix = RealMatrix::from_row_slice(3, 3, &[tr(0), sd, se, sd, tr(1), sf, se, sf, tr(2)]);
    Ok(Prop6Matrix { matrix, d })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prop6Outcome {
    pub lambda_min: f64,
    pub detected: bool,
}

/// Analytic test on a state of three equal-dimension parties.
pub fn prop6_test(rho: &DensityMatrix) -> Result<Prop6Outcome> {
    let d = rho.dims()[0];
    let bcm = standard_block_covariance(rho)?;
    let lambda_min = prop6_matrix(&bcm, d)?.lambda_min();
    Ok(Prop6Outcome { lambda_min, detected: lambda_min < -PSD_DETECTION_TOL })
}

/// Upper-triangular positions of a 3×3 block, in variable order.
const TRIANGLE: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];

/// Index of the variable holding `Y_α(i, j)`; variable 0 is `t`.
pub fn y_variable(alpha: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    1 + 6 * alpha + TRIANGLE.iter().position(|&p| p == (i, j)).expect("3x3 index")
}

/// Linear SDP for the qubit criterion. Blocks: `γ − ⊕Y_α` (size `3N`), then
/// `Y_α` for each party.
pub fn build_cmc_sdp(bcm: &BlockCovarianceMatrix) -> Result<SdpProblem> {
    if !bcm.is_all_qubits() || bcm.block_sizes().iter().any(|&s| s != 3) {
        return Err(Error::Precondition(format!(
            "SDP test needs qubit parties with 3x3 blocks, got dims {:?}",
            bcm.local_dims()
        )));
    }
    let n = bcm.num_parties();
    let mut blocks = vec![3 * n];
    blocks.extend(std::iter::repeat_n(3, n));
    let mut p = SdpProblem::new(blocks, 1 + 6 * n);
    p.set_objective(0, 1.0)?;
    p.set_constant_block(0, bcm.data().clone())?;
    for alpha in 0..n {
        for &(i, j) in &TRIANGLE {
            let v = y_variable(alpha, i, j);
            p.add_coefficient(v, 0, 3 * alpha + i, 3 * alpha + j, -1.0)?;
            p.add_coefficient(v, alpha + 1, i, j, 1.0)?;
        }
        let trace: Vec<(usize, f64)> = (0..3).map(|i| (y_variable(alpha, i, i), 1.0)).chain([(0, -1.0)]).collect();
        p.add_equality(&trace, 0.0)?;
    }
    Ok(p)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub iterations: usize,
    pub dual_objective: f64,
    /// Most negative eigenvalue of the LMI at the returned point.
    pub lmi_residual: f64,
    pub equality_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CmcResult {
    pub t_star: f64,
    pub detected: bool,
    /// Set when `t* ≤ 0`, where no `X_α = Y_α/t` can be recovered.
    pub inconclusive: bool,
    /// `X_α = Y_α/t*` per party (empty when inconclusive).
    pub x_blocks: Vec<[[f64; 3]; 3]>,
    pub certificate: Certificate,
}

impl CmcResult {
    /// Verdict for a detection margin other than the default.
    pub fn detected_with(&self, tol: f64) -> bool {
        self.t_star < 1.0 - tol
    }
}

/// Solves the SDP built from `bcm`.
pub fn cmc_sdp_from_blocks(bcm: &BlockCovarianceMatrix) -> Result<CmcResult> {
    let p = build_cmc_sdp(bcm)?;
    let sol = solve_with(&p, &SolverOptions::with_tol(SDP_SOLVER_TOL))?;
    let certificate = Certificate {
        iterations: sol.iterations,
        dual_objective: sol.dual_objective,
        lmi_residual: sol.feasibility_residual,
        equality_residual: sol.equality_residual,
    };
    if sol.status != SdpStatus::Optimal {
        return Err(Error::NotConverged(format!(
            "{:?} after {} iterations: t = {}, dual = {}, LMI residual {:e}, equality residual {:e}",
            sol.status,
            sol.iterations,
            sol.objective,
            sol.dual_objective,
            sol.feasibility_residual,
            sol.equality_residual
        )));
    }
    let t_star = sol.objective;
    let inconclusive = t_star <= 0.0;
    let x_blocks = if inconclusive {
        Vec::new()
    } else {
        (0..bcm.num_parties())
            .map(|alpha| {
                let mut x = [[0.0; 3]; 3];
                for (i, row) in x.iter_mut().enumerate() {
                    for (j, v) in row.iter_mut().enumerate() {
                        *v = sol.x[y_variable(alpha, i, j)] / t_star;
                    }
                }
                x
            })
            .collect()
    };
    Ok(CmcResult { t_star, detected: t_star < 1.0 - SDP_DETECTION_TOL, inconclusive, x_blocks, certificate })
}

/// SDP test on an all-qubit state.
pub fn cmc_sdp_test(rho: &DensityMatrix) -> Result<CmcResult> {
    if !rho.is_all_qubits() {
        return Err(Error::Precondition(format!("SDP test needs qubits, got dims {:?}", rho.dims())));
    }
    cmc_sdp_from_blocks(&standard_block_covariance(rho)?)
}
