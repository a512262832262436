//! Dense symmetric helpers shared by the interior-point solver and the
//! barrier oracle. All matrices here are small (tens of rows).

use nalgebra::{Cholesky, DMatrix, SymmetricEigen};

pub(crate) fn symmetrize(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
}

pub(crate) fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return f64::INFINITY;
    }
    SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Applies `f` to the eigenvalues of a symmetric matrix.
#[cfg(test)]
pub(crate) fn spectral_map(m: &DMatrix<f64>, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(m.clone());
    let v = &eig.eigenvectors;
    let mut scaled = v.clone();
    for (j, &lambda) in eig.eigenvalues.iter().enumerate() {
        let fl = f(lambda);
        for i in 0..v.nrows() {
            scaled[(i, j)] *= fl;
        }
    }
    let mut out = scaled * v.transpose();
    symmetrize(&mut out);
    out
}

pub(crate) fn frobenius_dot(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

pub(crate) fn spd_inverse(m: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let chol = Cholesky::new(m.clone())?;
    let mut inv = chol.inverse();
    symmetrize(&mut inv);
    Some(inv)
}

/// Largest `a` with `m + a·d ⪰ 0`, for positive definite `m`.
/// Returns `f64::INFINITY` when the whole ray stays in the cone.
pub(crate) fn max_step(m: &DMatrix<f64>, d: &DMatrix<f64>) -> Option<f64> {
    if m.nrows() == 0 {
        return Some(f64::INFINITY);
    }
    let chol = Cholesky::new(m.clone())?;
    let l = chol.l();
    let linv = l.clone().try_inverse()?;
    let mut t = &linv * d * linv.transpose();
    symmetrize(&mut t);
    let lmin = min_eigenvalue(&t);
    if lmin >= 0.0 {
        Some(f64::INFINITY)
    } else {
        Some(-1.0 / lmin)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn max_step_on_identity() {
        let m = DMatrix::<f64>::identity(3, 3);
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![-2.0, 1.0, 0.0]));
        assert!((max_step(&m, &d).unwrap() - 0.5).abs() < 1e-14);
        assert_eq!(max_step(&m, &m).unwrap(), f64::INFINITY);
    }

    #[test]
    fn spectral_sqrt_squares_back() {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 3.0]);
        let r = spectral_map(&m, f64::sqrt);
        assert!((&r * &r - &m).amax() < 1e-12);
    }
}
