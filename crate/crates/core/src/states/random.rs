//! Random states for sweeps and property tests.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityMatrix, C64};

fn gaussian_c64<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-distributed unit vector in `C^dim`.
pub fn random_ket<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..dim).map(|_| gaussian_c64(rng)).collect();
        let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|a| a / norm).collect();
        }
    }
}

/// Convex mixture of `terms` random pure product states of `n` qubits, with
/// Dirichlet-like weights from normalized uniform draws.
pub fn random_product_mixture<R: Rng + ?Sized>(rng: &mut R, n: usize, terms: usize) -> Result<DensityMatrix> {
    if n == 0 || terms == 0 {
        return Err(Error::InvalidParameter("need at least one qubit and one term".into()));
    }
    let weights: Vec<f64> = (0..terms).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = weights.iter().sum();
    let dim = 1usize << n;
    let mut m = ComplexMatrix::zeros(dim, dim);
    for w in weights {
        let kets: Vec<Vec<C64>> = (0..n).map(|_| random_ket(rng, 2)).collect();
        let rho = super::product_state(&kets)?;
        m = &m + &rho.matrix().scale_real(w / total);
    }
    DensityMatrix::new(m.hermitian_part(), vec![2; n])
}

/// `G G† / Tr(G G†)` for a `dim × rank` complex Ginibre matrix `G`.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, dims: &[usize], rank: usize) -> Result<DensityMatrix> {
    let dim: usize = dims.iter().product();
    if dim == 0 || rank == 0 {
        return Err(Error::InvalidParameter("empty dimensions or zero rank".into()));
    }
    let g = ComplexMatrix::from_fn(dim, rank, |_, _| gaussian_c64(rng));
    let ggd = &g * &g.adjoint();
    let tr = ggd.trace().re;
    DensityMatrix::new(ggd.scale_real(1.0 / tr).hermitian_part(), dims.to_vec())
}

/// Haar-random single-qubit unitary.
pub fn random_su2<R: Rng + ?Sized>(rng: &mut R) -> ComplexMatrix {
    let v = random_ket(rng, 2);
    let (a, b) = (v[0], v[1]);
    ComplexMatrix::new(2, 2, vec![a, -b.conj(), b, a.conj()]).expect("2x2")
}

/// `U₁ ⊗ … ⊗ U_n` with independent Haar factors.
pub fn random_local_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let factors: Vec<ComplexMatrix> = (0..n).map(|_| random_su2(rng)).collect();
    crate::linalg::tensor_all(&factors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn su2_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let u = random_su2(&mut rng);
            let p = &u * &u.adjoint();
            assert!(p.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-14);
        }
    }

    #[test]
    fn ginibre_rank_and_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rho = random_density(&mut rng, &[2, 2, 2], 2).unwrap();
        let ev = rho.eigenvalues();
        assert!(ev[..6].iter().all(|v| v.abs() < 1e-12));
        assert!(ev[6] > 1e-6);
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn product_mixture_is_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let rho = random_product_mixture(&mut rng, 3, 4).unwrap();
        assert!(rho.eigenvalues()[0] > -1e-12);
    }
}
