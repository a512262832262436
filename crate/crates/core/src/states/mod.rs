//! State families: GHZ and W states, generalized-Schmidt three-qubit
//! states, thermal states of two Heisenberg Hamiltonians, and graph states.

mod graph;
pub mod random;

use std::f64::consts::PI;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eig_unchecked, embed, spectral_apply, ComplexMatrix, DensityMatrix, HermitianOperator, C64};
use crate::pauli::Pauli;

pub use graph::{graph_state, Graph, StabilizerElement};

fn ket_with(n: usize, amps: &[(usize, C64)]) -> Vec<C64> {
    let mut ket = vec![C64::new(0.0, 0.0); 1 << n];
    for &(idx, a) in amps {
        ket[idx] += a;
    }
    ket
}

/// `(|0…0⟩ + |1…1⟩)/√2`.
pub fn ghz(n: usize) -> Result<DensityMatrix> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("GHZ state needs n >= 2, got {n}")));
    }
    let a = C64::new(1.0, 0.0);
    DensityMatrix::from_ket(&ket_with(n, &[(0, a), ((1 << n) - 1, a)]), vec![2; n])
}

/// Equal superposition of the `n` single-excitation basis states.
pub fn w_state(n: usize) -> Result<DensityMatrix> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("W state needs n >= 2, got {n}")));
    }
    let a = C64::new(1.0, 0.0);
    let amps: Vec<_> = (0..n).map(|k| (1usize << k, a)).collect();
    DensityMatrix::from_ket(&ket_with(n, &amps), vec![2; n])
}

/// Normalized three-qubit state `𝒩(|000⟩ + ε|110⟩ + |111⟩)`.
pub fn perturbed_ghz(epsilon: f64) -> Result<DensityMatrix> {
    let one = C64::new(1.0, 0.0);
    DensityMatrix::from_ket(&ket_with(3, &[(0b000, one), (0b110, C64::new(epsilon, 0.0)), (0b111, one)]), vec![2, 2, 2])
}

/// Parameters of the generalized Schmidt form
/// `λ₀|000⟩ + λ₁e^{iφ}|100⟩ + λ₂|101⟩ + λ₃|110⟩ + λ₄|111⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchmidtParams {
    lambdas: [f64; 5],
    phi: f64,
}

impl SchmidtParams {
    pub fn new(lambdas: [f64; 5], phi: f64) -> Result<Self> {
        if lambdas.iter().any(|&l| !(l >= 0.0) || !l.is_finite()) {
            return Err(Error::InvalidParameter(format!("negative Schmidt coefficient in {lambdas:?}")));
        }
        let norm: f64 = lambdas.iter().map(|l| l * l).sum();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("Schmidt coefficients square-sum to {norm}, expected 1")));
        }
        if !(0.0..=PI).contains(&phi) {
            return Err(Error::InvalidParameter(format!("phase {phi} outside [0, π]")));
        }
        Ok(Self { lambdas, phi })
    }

    /// Rescales `raw` to unit square-sum before validating.
    pub fn normalized(raw: [f64; 5], phi: f64) -> Result<Self> {
        let norm = raw.iter().map(|l| l * l).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidParameter("all Schmidt coefficients are zero".into()));
        }
        Self::new(raw.map(|l| l / norm), phi)
    }

    /// λᵢ uniform on [0, 1] then normalized, φ uniform on [0, π]. The
    /// measure-zero all-zero draw is redrawn.
    pub fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let raw: [f64; 5] = std::array::from_fn(|_| rng.random::<f64>());
            let phi = rng.random::<f64>() * PI;
            if let Ok(p) = Self::normalized(raw, phi) {
                return p;
            }
        }
    }

    pub fn lambdas(&self) -> [f64; 5] {
        self.lambdas
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// Deterministic draw from a seed.
pub fn sample_schmidt(seed: u64) -> SchmidtParams {
    SchmidtParams::sample(&mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn schmidt_state(p: &SchmidtParams) -> Result<DensityMatrix> {
    let l = p.lambdas;
    let r = |x: f64| C64::new(x, 0.0);
    let ket = ket_with(
        3,
        &[
            (0b000, r(l[0])),
            (0b100, C64::from_polar(l[1], p.phi)),
            (0b101, r(l[2])),
            (0b110, r(l[3])),
            (0b111, r(l[4])),
        ],
    );
    DensityMatrix::from_ket(&ket, vec![2, 2, 2])
}

/// Direction pattern of the local field in the three-spin Heisenberg model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    /// `h(σ_z¹ + σ_z² + σ_z³)`.
    Zzz,
    /// `h(σ_z¹ + σ_x² + σ_z³)`.
    Zxz,
}

impl FieldKind {
    fn letters(self) -> [Pauli; 3] {
        match self {
            FieldKind::Zzz => [Pauli::Z, Pauli::Z, Pauli::Z],
            FieldKind::Zxz => [Pauli::Z, Pauli::X, Pauli::Z],
        }
    }
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FieldKind::Zzz => "zzz",
            FieldKind::Zxz => "zxz",
        })
    }
}

impl std::str::FromStr for FieldKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "zzz" | "symmetric" => Ok(FieldKind::Zzz),
            "zxz" | "asymmetric" => Ok(FieldKind::Zxz),
            _ => Err(Error::InvalidParameter(format!("unknown field kind `{s}`"))),
        }
    }
}

/// Three spins with pairwise Heisenberg coupling `S⃗ᵢ·S⃗ⱼ` (full Pauli
/// vectors) and a local field of strength `h`, at temperature `kT`
/// (coupling and Boltzmann constant set to 1).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThermalModel {
    pub kind: FieldKind,
    pub field: f64,
    pub temperature: f64,
}

impl ThermalModel {
    pub fn new(kind: FieldKind, field: f64, temperature: f64) -> Result<Self> {
        if !(temperature > 0.0) || !temperature.is_finite() {
            return Err(Error::InvalidParameter(format!("temperature must be positive, got {temperature}")));
        }
        if !field.is_finite() {
            return Err(Error::InvalidParameter(format!("non-finite field {field}")));
        }
        Ok(Self { kind, field, temperature })
    }
}

pub fn hamiltonian(model: &ThermalModel) -> HermitianOperator {
    let dims = [2, 2, 2];
    let site = |p: Pauli, k: usize| embed(&p.matrix(), k, &dims).expect("qubit site");
    let mut h = ComplexMatrix::zeros(8, 8);
    for (a, b) in [(0, 1), (1, 2), (0, 2)] {
        for p in Pauli::XYZ {
            h = &h + &(&site(p, a) * &site(p, b));
        }
    }
    for (k, p) in model.kind.letters().into_iter().enumerate() {
        h = &h + &site(p, k).scale_real(model.field);
    }
    HermitianOperator::new(h.hermitian_part(), dims.to_vec()).expect("Hamiltonian is Hermitian")
}

/// `e^{−H/kT} / Tr e^{−H/kT}`, evaluated with the ground energy shifted to
/// zero so no exponent is positive.
pub fn thermal_state(model: &ThermalModel) -> Result<DensityMatrix> {
    let beta = 1.0 / model.temperature;
    if !beta.is_finite() || !(model.temperature > 0.0) {
        return Err(Error::Overflow { exponent: beta });
    }
    let h = hamiltonian(model);
    let eig = eig_unchecked(h.matrix());
    let ground = eig.values[0];
    let unnormalized = spectral_apply(&eig, |l| (-(l - ground) * beta).exp());
    let z = unnormalized.trace().re;
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::Overflow { exponent: beta * (eig.values[7] - ground) });
    }
    DensityMatrix::new(unnormalized.scale_real(1.0 / z), h.dims().to_vec())
}

/// Product state from one ket per subsystem.
pub fn product_state(kets: &[Vec<C64>]) -> Result<DensityMatrix> {
    let mut full = vec![C64::new(1.0, 0.0)];
    let mut dims = Vec::with_capacity(kets.len());
    for k in kets {
        dims.push(k.len());
        full = full.iter().flat_map(|a| k.iter().map(move |b| a * b)).collect();
    }
    DensityMatrix::from_ket(&full, dims)
}

/// `|0…0⟩` on `n` qubits.
pub fn all_zeros(n: usize) -> Result<DensityMatrix> {
    DensityMatrix::from_ket(&ket_with(n, &[(0, C64::new(1.0, 0.0))]), vec![2; n])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::partial_trace;

    #[test]
    fn ghz3_corners() {
        let g = ghz(3).unwrap();
        let m = g.matrix();
        for (r, c) in [(0, 0), (0, 7), (7, 0), (7, 7)] {
            assert!((m[(r, c)] - C64::new(0.5, 0.0)).norm() < 1e-15);
        }
        let nonzero = m.data().iter().filter(|x| x.norm() > 0.0).count();
        assert_eq!(nonzero, 4);
    }

    #[test]
    fn ghz2_is_pure_bell_state() {
        let g = ghz(2).unwrap();
        assert!((g.purity() - 1.0).abs() < 1e-14);
        assert!(ghz(1).is_err());
    }

    #[test]
    fn ghz_single_qubit_marginals_are_mixed() {
        for n in 2..=5 {
            let g = ghz(n).unwrap();
            for k in 0..n {
                let r = g.marginal(&[k]).unwrap();
                assert!(r.matrix().max_abs_diff(&ComplexMatrix::diagonal(&[0.5, 0.5])) < 1e-14);
            }
        }
    }

    #[test]
    fn schmidt_edge_cases() {
        let p = SchmidtParams::new([1.0, 0.0, 0.0, 0.0, 0.0], 0.0).unwrap();
        let s = schmidt_state(&p).unwrap();
        assert!((s.matrix()[(0, 0)].re - 1.0).abs() < 1e-15);

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let p = SchmidtParams::new([h, 0.0, 0.0, 0.0, h], 1.0).unwrap();
        assert!(schmidt_state(&p).unwrap().matrix().max_abs_diff(ghz(3).unwrap().matrix()) < 1e-15);
    }

    #[test]
    fn schmidt_biseparable_marginal() {
        // λ₀|000⟩ + λ₂|101⟩ = |0⟩⊗|0⟩⊗|0⟩ + |1⟩⊗|0⟩⊗|1⟩: qubit 1 factors out,
        // qubit 0 alone is maximally mixed.
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let p = SchmidtParams::new([h, 0.0, h, 0.0, 0.0], 0.3).unwrap();
        let s = schmidt_state(&p).unwrap();
        let q1 = s.marginal(&[1]).unwrap();
        assert!((q1.purity() - 1.0).abs() < 1e-14);
        let q0 = s.marginal(&[0]).unwrap();
        assert!((q0.purity() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn schmidt_phase_unobservable_without_lambda1() {
        let l = [0.5, 0.0, 0.5, 0.5, 0.5];
        let a = schmidt_state(&SchmidtParams::new(l, 0.0).unwrap()).unwrap();
        let b = schmidt_state(&SchmidtParams::new(l, 2.1).unwrap()).unwrap();
        assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-12);
    }

    #[test]
    fn schmidt_rejects_bad_params() {
        assert!(SchmidtParams::new([0.5; 5], 0.0).is_err());
        assert!(SchmidtParams::new([1.0, 0.0, 0.0, 0.0, 0.0], 4.0).is_err());
        assert!(SchmidtParams::new([-1.0, 0.0, 0.0, 0.0, 0.0], 0.0).is_err());
    }

    #[test]
    fn seeded_sampling_is_deterministic() {
        assert_eq!(sample_schmidt(42), sample_schmidt(42));
        assert_ne!(sample_schmidt(42), sample_schmidt(43));
    }

    #[test]
    fn sampled_phase_statistics() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 10_000;
        let mut sum = 0.0;
        for _ in 0..n {
            let p = SchmidtParams::sample(&mut rng);
            let norm: f64 = p.lambdas().iter().map(|l| l * l).sum();
            assert!((norm - 1.0).abs() < 1e-12);
            sum += p.phi();
        }
        // Uniform on [0, π]: σ = π/√12, standard error σ/√n.
        let mean = sum / n as f64;
        let se = PI / 12f64.sqrt() / (n as f64).sqrt();
        assert!((mean - PI / 2.0).abs() < 3.0 * se, "{mean}");
    }

    /// Yields zeros for the first `zeros` draws, then defers to ChaCha.
    struct ZerosFirst {
        zeros: usize,
        inner: ChaCha8Rng,
    }

    impl rand::RngCore for ZerosFirst {
        fn next_u32(&mut self) -> u32 {
            self.next_u64() as u32
        }
        fn next_u64(&mut self) -> u64 {
            if self.zeros > 0 {
                self.zeros -= 1;
                0
            } else {
                self.inner.next_u64()
            }
        }
        fn fill_bytes(&mut self, dst: &mut [u8]) {
            for b in dst {
                *b = self.next_u64() as u8;
            }
        }
    }

    #[test]
    fn all_zero_draw_is_resampled() {
        let mut rng = ZerosFirst { zeros: 6, inner: ChaCha8Rng::seed_from_u64(1) };
        let p = SchmidtParams::sample(&mut rng);
        assert!(p.lambdas().iter().any(|&l| l > 0.0));
    }

    #[test]
    fn hamiltonians_agree_without_field() {
        let a = hamiltonian(&ThermalModel::new(FieldKind::Zzz, 0.0, 1.0).unwrap());
        let b = hamiltonian(&ThermalModel::new(FieldKind::Zxz, 0.0, 1.0).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn heisenberg_spectrum_at_zero_field() {
        // Σ σᵢ·σⱼ = 2(S(S+1) − 9/4) for total spin S:
        // S=3/2 → 3 (four states), S=1/2 → −3 (two doublets).
        let h = hamiltonian(&ThermalModel::new(FieldKind::Zzz, 0.0, 1.0).unwrap());
        let ev = crate::linalg::hermitian_eig(&h).values;
        for (k, v) in ev.iter().enumerate() {
            let expected = if k < 4 { -3.0 } else { 3.0 };
            assert!((v - expected).abs() < 1e-12, "{ev:?}");
        }
    }

    #[test]
    fn field_directions_do_not_commute() {
        let a = hamiltonian(&ThermalModel::new(FieldKind::Zzz, 1.0, 1.0).unwrap());
        let b = hamiltonian(&ThermalModel::new(FieldKind::Zxz, 1.0, 1.0).unwrap());
        let comm = &(a.matrix() * b.matrix()) - &(b.matrix() * a.matrix());
        assert!(comm.max_abs() > 1e-3);
    }

    #[test]
    fn high_temperature_limit() {
        let rho = thermal_state(&ThermalModel::new(FieldKind::Zxz, 3.0, 1e6).unwrap()).unwrap();
        let mixed = ComplexMatrix::identity(8).scale_real(1.0 / 8.0);
        assert!(rho.matrix().max_abs_diff(&mixed) < 1e-5);
    }

    #[test]
    fn thermal_state_commutes_with_hamiltonian() {
        for (kind, h, t) in [(FieldKind::Zzz, 1.3, 0.7), (FieldKind::Zxz, 4.3, 5.533), (FieldKind::Zxz, 12.0, 0.2)] {
            let model = ThermalModel::new(kind, h, t).unwrap();
            let rho = thermal_state(&model).unwrap();
            let ham = hamiltonian(&model);
            let comm = &(rho.matrix() * ham.matrix()) - &(ham.matrix() * rho.matrix());
            assert!(comm.max_abs() < 1e-10);
            assert!(rho.eigenvalues()[0] >= 0.0 - 1e-15);
            assert!((rho.matrix().trace().re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn thermal_trace_matches_eigenvalue_sum() {
        let model = ThermalModel::new(FieldKind::Zxz, 2.0, 1.7).unwrap();
        let h = hamiltonian(&model);
        let e = crate::linalg::matrix_exp_hermitian(&h, -1.0 / model.temperature).unwrap();
        let ev = crate::linalg::hermitian_eig(&h).values;
        let z: f64 = ev.iter().map(|l| (-l / model.temperature).exp()).sum();
        assert!((e.trace().re - z).abs() < 1e-10 * z);
    }

    #[test]
    fn invalid_temperature() {
        assert!(ThermalModel::new(FieldKind::Zzz, 0.0, 0.0).is_err());
        assert!(ThermalModel::new(FieldKind::Zzz, 0.0, -1.0).is_err());
        let tiny = ThermalModel { kind: FieldKind::Zzz, field: 0.0, temperature: 1e-320 };
        assert!(matches!(thermal_state(&tiny), Err(Error::Overflow { .. })));
    }

    #[test]
    fn perturbed_ghz_is_normalized() {
        let s = perturbed_ghz(1e-5).unwrap();
        assert!((s.purity() - 1.0).abs() < 1e-12);
        let r = partial_trace(s.matrix(), s.dims(), &[0]).unwrap();
        assert!((r.trace().re - 1.0).abs() < 1e-14);
    }
}
