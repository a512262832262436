//! Seeded sweeps over random generalized-Schmidt states.

use entcov::cmc::{cmc_sdp_test, prop6_test};
use entcov::states::{schmidt_state, SchmidtParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::CliResult;

/// Histogram bins of width 0.05 covering `t* ∈ [0, 1.05)`; values outside
/// land in the first or last bin.
pub const HIST_BINS: usize = 21;
pub const HIST_WIDTH: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub count: usize,
    pub seed: u64,
    pub prop6_detected: usize,
    pub sdp_detected: usize,
    pub sdp_failures: usize,
    pub prop6_fraction: f64,
    pub sdp_fraction: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub t_hist_edges: Vec<f64>,
    pub t_hist_counts: Vec<usize>,
}

struct Sample {
    prop6: bool,
    sdp: Option<(f64, bool)>,
}

fn evaluate(p: &SchmidtParams) -> entcov::Result<Sample> {
    let rho = schmidt_state(p)?;
    let prop6 = prop6_test(&rho)?.detected;
    let sdp = cmc_sdp_test(&rho).ok().map(|r| (r.t_star, r.detected));
    Ok(Sample { prop6, sdp })
}

/// Draws `count` parameter sets from one ChaCha stream seeded by `seed`,
/// then evaluates them in parallel, so the result does not depend on the
/// number of workers.
pub fn random_sweep(count: usize, seed: u64) -> CliResult<SweepSummary> {
    if count == 0 {
        return Err(entcov::Error::InvalidParameter("count must be at least 1".into()).into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params: Vec<SchmidtParams> = (0..count).map(|_| SchmidtParams::sample(&mut rng)).collect();
    let samples = params.par_iter().map(evaluate).collect::<entcov::Result<Vec<_>>>()?;

    let mut counts = vec![0usize; HIST_BINS];
    let (mut t_min, mut t_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for (t, _) in samples.iter().filter_map(|s| s.sdp) {
        let bin = ((t / HIST_WIDTH).floor().max(0.0) as usize).min(HIST_BINS - 1);
        counts[bin] += 1;
        t_min = t_min.min(t);
        t_max = t_max.max(t);
    }
    let prop6_detected = samples.iter().filter(|s| s.prop6).count();
    let sdp_detected = samples.iter().filter(|s| s.sdp.is_some_and(|(_, d)| d)).count();
    Ok(SweepSummary {
        count,
        seed,
        prop6_detected,
        sdp_detected,
        sdp_failures: samples.iter().filter(|s| s.sdp.is_none()).count(),
        prop6_fraction: prop6_detected as f64 / count as f64,
        sdp_fraction: sdp_detected as f64 / count as f64,
        t_min,
        t_max,
        t_hist_edges: (0..=HIST_BINS).map(|k| k as f64 * HIST_WIDTH).map(|e| (e * 100.0).round() / 100.0).collect(),
        t_hist_counts: counts,
    })
}
