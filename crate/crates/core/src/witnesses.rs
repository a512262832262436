//! Spin-squeezing inequalities and negativity, used as reference criteria.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    eigenvalues_unchecked, partial_transpose, real_symmetric_eigenvalues, ComplexMatrix, DensityMatrix, RealMatrix,
};
use crate::pauli::Pauli;

pub const SSI_DETECTION_TOL: f64 = 1e-9;
const NEGATIVITY_FLOOR: f64 = 1e-12;

/// `σ_n = n_x σ_x + n_y σ_y + n_z σ_z`.
fn directed_pauli(n: [f64; 3]) -> ComplexMatrix {
    Pauli::XYZ.iter().zip(n).fold(ComplexMatrix::zeros(2, 2), |acc, (p, c)| &acc + &p.matrix().scale_real(c))
}

/// Collective spin components `J_k = ½ Σ_i σ_{n_k}^{(i)}` along the rows of
/// an orthogonal frame.
#[derive(Clone, Debug, PartialEq)]
pub struct CollectiveSpin {
    frame: [[f64; 3]; 3],
}

impl CollectiveSpin {
    /// Coordinate axes.
    pub fn standard() -> Self {
        Self { frame: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] }
    }

    /// Rows of `frame` must be orthonormal.
    pub fn with_frame(frame: [[f64; 3]; 3]) -> Result<Self> {
        for i in 0..3 {
            for j in 0..3 {
                let dot: f64 = (0..3).map(|k| frame[i][k] * frame[j][k]).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                if (dot - target).abs() > 1e-12 {
                    return Err(Error::InvalidParameter(format!("frame rows {i}, {j} not orthonormal")));
                }
            }
        }
        Ok(Self { frame })
    }

    pub fn frame(&self) -> [[f64; 3]; 3] {
        self.frame
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpinSqueezingData {
    pub n: usize,
    pub c: RealMatrix,
    pub gamma: RealMatrix,
    pub chi: RealMatrix,
    pub mean: [f64; 3],
}

pub fn spin_data(rho: &DensityMatrix) -> Result<SpinSqueezingData> {
    spin_data_in(rho, &CollectiveSpin::standard())
}

/// Assembles `C`, `Γ` and `χ` from one- and two-qubit marginals: the
/// same-site terms of `½{J_k, J_l}` reduce to `δ_kl N/4`.
pub fn spin_data_in(rho: &DensityMatrix, spin: &CollectiveSpin) -> Result<SpinSqueezingData> {
    if !rho.is_all_qubits() {
        return Err(Error::Precondition(format!("spin squeezing needs qubits, got dims {:?}", rho.dims())));
    }
    let n = rho.num_parties();
    let sig: Vec<ComplexMatrix> = spin.frame.iter().map(|&d| directed_pauli(d)).collect();
    let mut mean = [0.0; 3];
    for i in 0..n {
        let local = rho.marginal(&[i])?;
        for k in 0..3 {
            mean[k] += 0.5 * local.expectation(&sig[k]);
        }
    }
    let mut c = RealMatrix::identity(3, 3) * (n as f64 / 4.0);
    for i in 0..n {
        for j in i + 1..n {
            let pair = rho.marginal(&[i, j])?;
            for k in 0..3 {
                for l in 0..3 {
                    // ⟨σ_k^i σ_l^j⟩ + ⟨σ_l^i σ_k^j⟩ covers both orders of (i, j).
                    let v = pair.expectation(&sig[k].kron(&sig[l]));
                    c[(k, l)] += 0.25 * v;
                    c[(l, k)] += 0.25 * v;
                }
            }
        }
    }
    let m = nalgebra::Vector3::from(mean);
    let mm = RealMatrix::from_fn(3, 3, |k, l| m[k] * m[l]);
    let gamma = &c - mm;
    let chi = &gamma * (n as f64 - 1.0) + &c;
    Ok(SpinSqueezingData { n, c, gamma, chi, mean })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SsiReport {
    pub m1: f64,
    pub m2: f64,
    pub m3: f64,
    pub detected: bool,
}

impl SsiReport {
    pub fn min_margin(&self) -> f64 {
        self.m1.min(self.m2).min(self.m3)
    }
}

pub fn ssi_margins(data: &SpinSqueezingData) -> SsiReport {
    let n = data.n as f64;
    let tr_g = data.gamma.trace();
    let tr_c = data.c.trace();
    let ev = real_symmetric_eigenvalues(&data.chi);
    let m1 = tr_g - n / 2.0;
    let m2 = ev[0] - (tr_c - n / 2.0);
    let m3 = ((n - 1.0) * tr_g - n * (n - 2.0) / 4.0) - ev[2];
    let detected = m1.min(m2).min(m3) < -SSI_DETECTION_TOL;
    SsiReport { m1, m2, m3, detected }
}

pub fn ssi_test(rho: &DensityMatrix) -> Result<SsiReport> {
    Ok(ssi_margins(&spin_data(rho)?))
}

/// `(‖ρ^{T_A}‖₁ − 1)/2` for the cut `subsystems | rest`, clamped to 0 below
/// `1e-12`.
pub fn negativity(rho: &DensityMatrix, subsystems: &[usize]) -> Result<f64> {
    let n = rho.num_parties();
    let mut s = subsystems.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.is_empty() || s.len() >= n {
        return Err(Error::InvalidParameter(format!("trivial bipartition {subsystems:?} of {n} parties")));
    }
    let pt = partial_transpose(rho, &s)?;
    let trace_norm: f64 = eigenvalues_unchecked(&pt).iter().map(|l| l.abs()).sum();
    let neg = (trace_norm - 1.0) / 2.0;
    Ok(if neg < NEGATIVITY_FLOOR { 0.0 } else { neg })
}

/// Negativity of every single-party cut, in party order.
pub fn single_party_negativities(rho: &DensityMatrix) -> Result<Vec<f64>> {
    (0..rho.num_parties()).map(|k| negativity(rho, &[k])).collect()
}

pub fn max_negativity(rho: &DensityMatrix) -> Result<f64> {
    Ok(single_party_negativities(rho)?.into_iter().fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::embed;
    use crate::states::{all_zeros, ghz, w_state};

    /// `C` from explicitly assembled collective operators.
    fn dense_c(rho: &DensityMatrix) -> RealMatrix {
        let n = rho.num_parties();
        let dims = vec![2; n];
        let j: Vec<ComplexMatrix> = Pauli::XYZ
            .iter()
            .map(|p| {
                (0..n).fold(ComplexMatrix::zeros(1 << n, 1 << n), |acc, i| {
                    &acc + &embed(&p.matrix(), i, &dims).unwrap().scale_real(0.5)
                })
            })
            .collect();
        RealMatrix::from_fn(3, 3, |k, l| rho.expectation(&(&j[k] * &j[l])))
    }

    fn diag(v: [f64; 3]) -> RealMatrix {
        RealMatrix::from_diagonal(&nalgebra::DVector::from_vec(v.to_vec()))
    }

    #[test]
    fn marginal_assembly_matches_dense_operators() {
        for rho in [ghz(3).unwrap(), w_state(4).unwrap(), crate::states::perturbed_ghz(0.7).unwrap()] {
            let d = spin_data(&rho).unwrap();
            assert!((&d.c - dense_c(&rho)).amax() < 1e-12);
        }
    }

    #[test]
    fn fully_mixed() {
        let d = spin_data(&DensityMatrix::maximally_mixed(vec![2, 2, 2])).unwrap();
        assert!((&d.c - diag([0.75; 3])).amax() < 1e-14);
        assert!((d.gamma.trace() - 2.25).abs() < 1e-14);
    }

    #[test]
    fn all_zeros_saturates_first_inequality() {
        let rho = all_zeros(3).unwrap();
        let d = spin_data(&rho).unwrap();
        assert!((&d.gamma - diag([0.75, 0.75, 0.0])).amax() < 1e-14);
        let r = ssi_margins(&d);
        assert!(r.m1.abs() < 1e-12);
        assert!(!r.detected);
    }

    #[test]
    fn ghz_saturates_second_and_third() {
        let d = spin_data(&ghz(3).unwrap()).unwrap();
        assert!((&d.c - diag([0.75, 0.75, 2.25])).amax() < 1e-14);
        assert!(d.mean.iter().all(|m| m.abs() < 1e-14));
        let r = ssi_margins(&d);
        assert!((r.m1 - 2.25).abs() < 1e-12, "{r:?}");
        assert!(r.m2.abs() < 1e-12 && r.m3.abs() < 1e-12, "{r:?}");
        assert!(!r.detected);
    }

    #[test]
    fn chi_identity() {
        let d = spin_data(&w_state(3).unwrap()).unwrap();
        assert_eq!(d.chi, &d.gamma * 2.0 + &d.c);
    }

    #[test]
    fn w_state_violates_an_inequality() {
        assert!(ssi_test(&w_state(3).unwrap()).unwrap().detected);
    }

    #[test]
    fn negativity_values() {
        assert_eq!(max_negativity(&all_zeros(3).unwrap()).unwrap(), 0.0);
        let g = ghz(3).unwrap();
        for k in 0..3 {
            assert!((negativity(&g, &[k]).unwrap() - 0.5).abs() < 1e-12);
        }
        assert!(max_negativity(&w_state(3).unwrap()).unwrap() > 0.1);
        assert!(negativity(&g, &[]).is_err());
        assert!(negativity(&g, &[0, 1, 2]).is_err());
    }

    #[test]
    fn frame_validation() {
        assert!(CollectiveSpin::with_frame([[1.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]]).is_err());
    }
}
