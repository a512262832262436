use entcov::cmc::{cmc_sdp_test, prop6_test, Prop6Outcome, SDP_DETECTION_TOL};
use entcov::linalg::DensityMatrix;
use entcov::witnesses::{single_party_negativities, ssi_test, SsiReport};
use serde::{Deserialize, Serialize};

use crate::CliResult;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SdpRecord {
    pub t_star: Option<f64>,
    /// `optimal`, `inconclusive`, or the solver failure message.
    pub status: String,
    pub iterations: Option<usize>,
    pub detected: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdicts {
    pub prop6: bool,
    pub sdp: bool,
    pub ssi: bool,
    pub ppt: bool,
    pub any: bool,
}

/// All criteria on one state. Criteria that do not apply to the state's
/// shape are `null`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectionReport {
    pub state: String,
    pub dims: Vec<usize>,
    pub prop6: Option<Prop6Outcome>,
    pub sdp: Option<SdpRecord>,
    pub ssi: Option<SsiReport>,
    /// Negativity of each single-party cut, in party order.
    pub negativities: Vec<f64>,
    pub verdict: Verdicts,
}

pub fn analyze(label: &str, rho: &DensityMatrix, tol_detect: Option<f64>) -> CliResult<DetectionReport> {
    let dims = rho.dims().to_vec();
    let three_equal = dims.len() == 3 && dims.iter().all(|&d| d == dims[0]);
    let prop6 = if three_equal { Some(prop6_test(rho)?) } else { None };
    let (sdp, ssi) = if rho.is_all_qubits() && dims.len() >= 2 {
        let tol = tol_detect.unwrap_or(SDP_DETECTION_TOL);
        let sdp = match cmc_sdp_test(rho) {
            Ok(r) => SdpRecord {
                t_star: Some(r.t_star),
                status: if r.inconclusive { "inconclusive".into() } else { "optimal".into() },
                iterations: Some(r.certificate.iterations),
                detected: r.detected_with(tol),
            },
            Err(e) => SdpRecord { t_star: None, status: e.to_string(), iterations: None, detected: false },
        };
        (Some(sdp), Some(ssi_test(rho)?))
    } else {
        (None, None)
    };
    let negativities = if dims.len() >= 2 { single_party_negativities(rho)? } else { Vec::new() };
    let verdict = {
        let prop6 = prop6.is_some_and(|p| p.detected);
        let sdp = sdp.as_ref().is_some_and(|s| s.detected);
        let ssi = ssi.is_some_and(|s| s.detected);
        let ppt = negativities.iter().any(|&n| n > 0.0);
        Verdicts { prop6, sdp, ssi, ppt, any: prop6 || sdp || ssi || ppt }
    };
    Ok(DetectionReport { state: label.to_string(), dims, prop6, sdp, ssi, negativities, verdict })
}
