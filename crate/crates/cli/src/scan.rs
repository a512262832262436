//! Thermal phase-diagram scans over temperature and field.

use entcov::cmc::{cmc_sdp_test, prop6_test};
use entcov::states::{thermal_state, FieldKind, ThermalModel};
use entcov::witnesses::{single_party_negativities, ssi_test};
use entcov::Error;
use rayon::prelude::*;

use crate::CliResult;

pub const CSV_HEADER: &str = "kT,h,prop6_lambda_min,sdp_t,ssi_m1,ssi_m2,ssi_m3,neg_A,neg_B,neg_C";

/// Inclusive arithmetic range `start, start + step, …, ≤ stop`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Axis {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Axis {
    pub fn new(start: f64, stop: f64, step: f64) -> entcov::Result<Self> {
        if !(step > 0.0) || !start.is_finite() || !stop.is_finite() || stop < start {
            return Err(Error::InvalidParameter(format!("bad axis {start}..{stop} step {step}")));
        }
        Ok(Self { start, stop, step })
    }

    /// Evenly spaced `count` points on `[start, stop]`.
    pub fn linspace(start: f64, stop: f64, count: usize) -> entcov::Result<Self> {
        if count < 2 {
            return Err(Error::InvalidParameter("linspace needs at least two points".into()));
        }
        Self::new(start, stop, (stop - start) / (count - 1) as f64)
    }

    pub fn values(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        // Rounded to 13 significant digits so 0.2-steps print as 0.6, not 0.6000000000000001.
        (0..count)
            .map(|k| {
                let v = self.start + k as f64 * self.step;
                format!("{v:.12e}").parse().expect("formatted float")
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanGrid {
    pub kind: FieldKind,
    pub kt: Axis,
    pub h: Axis,
}

impl ScanGrid {
    pub fn new(kind: FieldKind, kt: Axis, h: Axis) -> entcov::Result<Self> {
        if !(kt.start > 0.0) {
            return Err(Error::InvalidParameter(format!("temperature axis must start above 0, got {}", kt.start)));
        }
        Ok(Self { kind, kt, h })
    }

    /// kT ∈ [0.2, 10], h ∈ [0, 14], both in steps of 0.2.
    pub fn default_for(kind: FieldKind) -> Self {
        Self { kind, kt: Axis { start: 0.2, stop: 10.0, step: 0.2 }, h: Axis { start: 0.0, stop: 14.0, step: 0.2 } }
    }

    /// Grid points, kT outer.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let hs = self.h.values();
        self.kt.values().into_iter().flat_map(|t| hs.iter().map(move |&h| (t, h))).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanRow {
    pub kt: f64,
    pub h: f64,
    pub prop6_lambda_min: f64,
    /// NaN when the solver failed.
    pub sdp_t: f64,
    pub ssi: [f64; 3],
    pub neg: [f64; 3],
}

impl ScanRow {
    pub fn to_csv(&self) -> String {
        let fields: Vec<String> = [self.kt, self.h, self.prop6_lambda_min, self.sdp_t]
            .into_iter()
            .chain(self.ssi)
            .chain(self.neg)
            .map(|v| format!("{v:?}"))
            .collect();
        fields.join(",")
    }
}

pub fn scan_point(kind: FieldKind, kt: f64, h: f64) -> entcov::Result<ScanRow> {
    let rho = thermal_state(&ThermalModel::new(kind, h, kt)?)?;
    let prop6 = prop6_test(&rho)?;
    let sdp_t = cmc_sdp_test(&rho).map_or(f64::NAN, |r| r.t_star);
    let ssi = ssi_test(&rho)?;
    let neg = single_party_negativities(&rho)?;
    Ok(ScanRow {
        kt,
        h,
        prop6_lambda_min: prop6.lambda_min,
        sdp_t,
        ssi: [ssi.m1, ssi.m2, ssi.m3],
        neg: [neg[0], neg[1], neg[2]],
    })
}

/// Evaluates every grid point in parallel; rows come back in grid order.
pub fn scan_thermal(grid: &ScanGrid) -> CliResult<Vec<ScanRow>> {
    let rows: entcov::Result<Vec<ScanRow>> =
        grid.points().par_iter().map(|&(t, h)| scan_point(grid.kind, t, h)).collect();
    Ok(rows?)
}

pub fn to_csv(rows: &[ScanRow]) -> String {
    let mut s = String::with_capacity(rows.len() * 120);
    s.push_str(CSV_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&r.to_csv());
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_axes() {
        let g = ScanGrid::default_for(FieldKind::Zxz);
        let kt = g.kt.values();
        assert_eq!(kt.len(), 50);
        assert_eq!(kt[2], 0.6);
        assert_eq!(*kt.last().unwrap(), 10.0);
        assert_eq!(g.h.values().len(), 71);
        assert_eq!(g.points()[1], (0.2, 0.2));
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(Axis::new(0.0, 1.0, 0.0).is_err());
        assert!(Axis::new(1.0, 0.0, 0.1).is_err());
        let a = Axis::new(0.0, 1.0, 0.5).unwrap();
        assert!(ScanGrid::new(FieldKind::Zzz, a, a).is_err());
    }
}
