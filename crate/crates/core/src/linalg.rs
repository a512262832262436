//! Dense complex matrices, density matrices and the subsystem operations
//! used throughout the crate.
//!
//! Subsystem order is fixed: the first entry of a dimension list is the
//! leftmost tensor factor, i.e. the most significant digit of a basis index.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Dense real matrix, used for covariance matrices.
pub type RealMatrix = DMatrix<f64>;

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = -1e-10;

/// Largest exponent whose `exp` is still a finite `f64`.
const MAX_EXP_ARG: f64 = 709.0;

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 || rows * cols != data.len() {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Row-major real entries.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::new(rows, cols, entries.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = C64::new(v, 0.0);
        }
        m
    }

    /// `|ψ⟩⟨ψ|` for an (unnormalized) ket.
    pub fn projector(ket: &[C64]) -> Self {
        Self::from_fn(ket.len(), ket.len(), |r, c| ket[r] * ket[c].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// `max |H − H†|`, or infinity for non-square input.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst: f64 = 0.0;
        for r in 0..self.rows {
            for c in r..self.cols {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        worst
    }

    /// `(H + H†)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| 0.5 * (self[(r, c)] + self[(c, r)].conj()))
    }

    /// `Tr(self · other)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> C64 {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.rows, other.cols);
        let mut acc = C64::new(0.0, 0.0);
        for r in 0..self.rows {
            for k in 0..self.cols {
                acc += self[(r, k)] * other[(k, r)];
            }
        }
        acc
    }

    pub fn kron(&self, other: &Self) -> Self {
        tensor_product(self, other)
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[r * rhs.cols..(r + 1) * rhs.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Kronecker product `a ⊗ b`, with `a` as the more significant factor.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(a.rows * b.rows, a.cols * b.cols, |r, c| {
        a[(r / b.rows, c / b.cols)] * b[(r % b.rows, c % b.cols)]
    })
}

/// Tensor product of a list of factors, left to right.
pub fn tensor_all<'a>(factors: impl IntoIterator<Item = &'a ComplexMatrix>) -> ComplexMatrix {
    factors.into_iter().fold(ComplexMatrix::identity(1), |acc, f| tensor_product(&acc, f))
}

/// `𝟙 ⊗ … ⊗ local ⊗ … ⊗ 𝟙` with `local` on subsystem `site`.
pub fn embed(local: &ComplexMatrix, site: usize, dims: &[usize]) -> Result<ComplexMatrix> {
    check_index(site, dims.len())?;
    if local.rows != dims[site] || local.cols != dims[site] {
        return Err(Error::DimensionMismatch(format!(
            "local operator is {}x{}, subsystem {site} has dimension {}",
            local.rows, local.cols, dims[site]
        )));
    }
    let left: usize = dims[..site].iter().product();
    let right: usize = dims[site + 1..].iter().product();
    Ok(tensor_all([&ComplexMatrix::identity(left), local, &ComplexMatrix::identity(right)]))
}

fn check_index(index: usize, count: usize) -> Result<()> {
    if index >= count {
        return Err(Error::IndexOutOfRange { index, count });
    }
    Ok(())
}

fn check_dims(op: &ComplexMatrix, dims: &[usize]) -> Result<()> {
    let total: usize = dims.iter().product();
    if dims.is_empty() || dims.contains(&0) || !op.is_square() || op.rows != total {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} operator does not match subsystem dimensions {dims:?}",
            op.rows, op.cols
        )));
    }
    Ok(())
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

/// Flat-index offsets of every multi-index over `subset`, in lexicographic
/// order with the first listed subsystem most significant.
fn subset_offsets(dims: &[usize], strides: &[usize], subset: &[usize]) -> Vec<usize> {
    let mut offsets = vec![0usize];
    for &k in subset {
        offsets = offsets.iter().flat_map(|&o| (0..dims[k]).map(move |d| o + d * strides[k])).collect();
    }
    offsets
}

fn sorted_subset(subset: &[usize], count: usize) -> Result<Vec<usize>> {
    let mut s = subset.to_vec();
    for &k in &s {
        check_index(k, count)?;
    }
    s.sort_unstable();
    let before = s.len();
    s.dedup();
    if s.len() != before {
        return Err(Error::InvalidParameter(format!("repeated subsystem in {subset:?}")));
    }
    Ok(s)
}

/// Traces out every subsystem not in `keep`; kept subsystems stay in their
/// original relative order.
pub fn partial_trace(op: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    check_dims(op, dims)?;
    let keep = sorted_subset(keep, dims.len())?;
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep.contains(k)).collect();
    let st = strides(dims);
    let kept_off = subset_offsets(dims, &st, &keep);
    let traced_off = subset_offsets(dims, &st, &traced);
    let n = kept_off.len();
    let mut out = ComplexMatrix::zeros(n, n);
    for (r, &kr) in kept_off.iter().enumerate() {
        for (c, &kc) in kept_off.iter().enumerate() {
            out[(r, c)] = traced_off.iter().map(|&t| op[(kr + t, kc + t)]).sum();
        }
    }
    Ok(out)
}

/// Transposes the tensor factors listed in `subsystems`.
pub fn partial_transpose_op(op: &ComplexMatrix, dims: &[usize], subsystems: &[usize]) -> Result<ComplexMatrix> {
    check_dims(op, dims)?;
    let subs = sorted_subset(subsystems, dims.len())?;
    let st = strides(dims);
    let n = op.rows;
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        let (mut si, mut sj) = (i, j);
        for &k in &subs {
            let di = (i / st[k]) % dims[k];
            let dj = (j / st[k]) % dims[k];
            si = si - di * st[k] + dj * st[k];
            sj = sj - dj * st[k] + di * st[k];
        }
        op[(si, sj)]
    }))
}

pub fn partial_transpose(rho: &DensityMatrix, subsystems: &[usize]) -> Result<ComplexMatrix> {
    partial_transpose_op(rho.matrix(), rho.dims(), subsystems)
}

/// Hermitian operator on a tensor-product space.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
    dims: Vec<usize>,
}

impl HermitianOperator {
    pub fn new(matrix: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        check_dims(&matrix, &dims)?;
        let deviation = matrix.hermiticity_defect();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self { matrix, dims })
    }

    /// Single-subsystem operator.
    pub fn from_matrix(matrix: ComplexMatrix) -> Result<Self> {
        let n = matrix.rows;
        Self::new(matrix, vec![n])
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }
}

#[derive(Clone, Debug)]
pub struct Eigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector of `values[k]`.
    pub vectors: ComplexMatrix,
}

pub fn hermitian_eig(h: &HermitianOperator) -> Eigen {
    eig_unchecked(&h.matrix)
}

/// Eigendecomposition of a matrix already known to be Hermitian.
pub(crate) fn eig_unchecked(m: &ComplexMatrix) -> Eigen {
    let eig = SymmetricEigen::new(m.to_nalgebra());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let n = m.rows;
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Eigen { values, vectors }
}

pub(crate) fn eigenvalues_unchecked(m: &ComplexMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = m.to_nalgebra().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Ascending eigenvalues of a real symmetric matrix.
pub fn real_symmetric_eigenvalues(m: &RealMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Largest entrywise deviation from symmetry.
pub fn asymmetry(m: &RealMatrix) -> f64 {
    (m - m.transpose()).amax()
}

/// `V f(Λ) V†` for a Hermitian matrix.
pub(crate) fn spectral_apply(eig: &Eigen, f: impl Fn(f64) -> f64) -> ComplexMatrix {
    let v = &eig.vectors;
    let n = v.rows;
    let fl: Vec<f64> = eig.values.iter().map(|&l| f(l)).collect();
    let scaled = ComplexMatrix::from_fn(n, n, |r, c| v[(r, c)] * fl[c]);
    (&scaled * &v.adjoint()).hermitian_part()
}

/// `exp(scale · h)`. Fails instead of saturating when an exponent would
/// overflow.
pub fn matrix_exp_hermitian(h: &HermitianOperator, scale: f64) -> Result<ComplexMatrix> {
    if !scale.is_finite() {
        return Err(Error::InvalidParameter(format!("non-finite exponent scale {scale}")));
    }
    let eig = hermitian_eig(h);
    let worst = eig.values.iter().map(|&l| scale * l).fold(f64::NEG_INFINITY, f64::max);
    if worst > MAX_EXP_ARG || worst.is_nan() {
        return Err(Error::Overflow { exponent: worst });
    }
    Ok(spectral_apply(&eig, |l| (scale * l).exp()))
}

/// Hermitian, unit-trace, positive semidefinite matrix on a tensor product.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    dims: Vec<usize>,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        check_dims(&matrix, &dims)?;
        let deviation = matrix.hermiticity_defect();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotPhysical(format!("Hermiticity defect {deviation:e} exceeds {HERMITIAN_TOL:e}")));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::NotPhysical(format!("trace {tr} differs from 1 by more than {TRACE_TOL:e}")));
        }
        let lmin = eigenvalues_unchecked(&matrix)[0];
        if lmin < PSD_TOL {
            return Err(Error::NotPhysical(format!("minimum eigenvalue {lmin:e} below {PSD_TOL:e}")));
        }
        Ok(Self { matrix, dims })
    }

    /// Normalizes `ket` and returns its projector.
    pub fn from_ket(ket: &[C64], dims: Vec<usize>) -> Result<Self> {
        let norm = ket.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidParameter("ket has zero or non-finite norm".into()));
        }
        let unit: Vec<C64> = ket.iter().map(|a| a / norm).collect();
        Self::new(ComplexMatrix::projector(&unit).hermitian_part(), dims)
    }

    /// Convex combination `Σ wᵢ ρᵢ`; weights are normalized.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let (_, first) = parts.first().ok_or_else(|| Error::InvalidParameter("empty mixture".into()))?;
        let total: f64 = parts.iter().map(|(w, _)| w).sum();
        if parts.iter().any(|(w, _)| *w < 0.0) || total <= 0.0 {
            return Err(Error::InvalidParameter("mixture weights must be non-negative".into()));
        }
        let mut acc = ComplexMatrix::zeros(first.matrix.rows, first.matrix.cols);
        for (w, rho) in parts {
            if rho.dims != first.dims {
                return Err(Error::DimensionMismatch("mixture of different spaces".into()));
            }
            acc = &acc + &rho.matrix.scale_real(w / total);
        }
        Self::new(acc.hermitian_part(), first.dims.clone())
    }

    /// `𝟙/D`.
    pub fn maximally_mixed(dims: Vec<usize>) -> Self {
        let n: usize = dims.iter().product();
        Self { matrix: ComplexMatrix::identity(n).scale_real(1.0 / n as f64), dims }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_parties(&self) -> usize {
        self.dims.len()
    }

    pub fn is_all_qubits(&self) -> bool {
        self.dims.iter().all(|&d| d == 2)
    }

    pub fn purity(&self) -> f64 {
        self.matrix.trace_product(&self.matrix).re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        eigenvalues_unchecked(&self.matrix)
    }

    /// `Tr(ρ A)` (real part; `A` is assumed Hermitian).
    pub fn expectation(&self, a: &ComplexMatrix) -> f64 {
        self.matrix.trace_product(a).re
    }

    /// Reduced state on `keep`, in original subsystem order.
    pub fn marginal(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let m = partial_trace(&self.matrix, &self.dims, keep)?;
        let mut kept = keep.to_vec();
        kept.sort_unstable();
        let dims = kept.iter().map(|&k| self.dims[k]).collect();
        Ok(Self { matrix: m.hermitian_part(), dims })
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self { matrix: tensor_product(&self.matrix, &other.matrix), dims }
    }

    /// Applies `U ρ U†`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<DensityMatrix> {
        if u.rows != self.matrix.rows || !u.is_square() {
            return Err(Error::DimensionMismatch("unitary size".into()));
        }
        let m = &(u * &self.matrix) * &u.adjoint();
        Self::new(m.hermitian_part(), self.dims.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::Pauli;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn identity_kron_identity() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(tensor_product(&i2, &i2), ComplexMatrix::identity(4));
    }

    #[test]
    fn sigma_x_kron_sigma_z() {
        // [[0, Z], [Z, 0]] with Z = diag(1, -1)
        let m = tensor_product(&Pauli::X.matrix(), &Pauli::Z.matrix());
        let expected = ComplexMatrix::from_real(
            4,
            4,
            &[
                0., 0., 1., 0., //
                0., 0., 0., -1., //
                1., 0., 0., 0., //
                0., -1., 0., 0.,
            ],
        )
        .unwrap();
        assert_eq!(m, expected);
    }

    #[test]
    fn kron_dimensions() {
        let m = tensor_product(&ComplexMatrix::identity(2), &ComplexMatrix::identity(3));
        assert_eq!((m.rows(), m.cols()), (6, 6));
    }

    fn ghz3() -> DensityMatrix {
        let mut ket = vec![c(0.0); 8];
        ket[0] = c(1.0);
        ket[7] = c(1.0);
        DensityMatrix::from_ket(&ket, vec![2, 2, 2]).unwrap()
    }

    #[test]
    fn partial_trace_of_product() {
        let a = DensityMatrix::new(ComplexMatrix::from_real(2, 2, &[0.7, 0.2, 0.2, 0.3]).unwrap(), vec![2]).unwrap();
        let b = DensityMatrix::maximally_mixed(vec![3]);
        let ab = a.tensor(&b);
        let ra = partial_trace(ab.matrix(), ab.dims(), &[0]).unwrap();
        assert!(ra.max_abs_diff(a.matrix()) < 1e-15);
        let rb = partial_trace(ab.matrix(), ab.dims(), &[1]).unwrap();
        assert!(rb.max_abs_diff(b.matrix()) < 1e-15);
    }

    #[test]
    fn ghz_two_qubit_marginal() {
        let r = partial_trace(ghz3().matrix(), &[2, 2, 2], &[1, 2]).unwrap();
        let expected = ComplexMatrix::diagonal(&[0.5, 0.0, 0.0, 0.5]);
        assert!(r.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn keep_all_is_identity_map() {
        let rho = ghz3();
        let r = partial_trace(rho.matrix(), rho.dims(), &[2, 0, 1]).unwrap();
        assert_eq!(&r, rho.matrix());
    }

    #[test]
    fn partial_trace_rejects_bad_index() {
        let rho = ghz3();
        assert!(matches!(
            partial_trace(rho.matrix(), rho.dims(), &[3]),
            Err(Error::IndexOutOfRange { index: 3, count: 3 })
        ));
        assert!(partial_transpose(&rho, &[5]).is_err());
    }

    #[test]
    fn ghz_partial_transpose_min_eigenvalue() {
        let pt = partial_transpose(&ghz3(), &[0]).unwrap();
        let ev = eigenvalues_unchecked(&pt);
        assert!((ev[0] + 0.5).abs() < 1e-12, "{ev:?}");
    }

    #[test]
    fn partial_transpose_is_involution() {
        let rho = ghz3();
        let once = partial_transpose(&rho, &[1]).unwrap();
        let twice = partial_transpose_op(&once, &[2, 2, 2], &[1]).unwrap();
        assert_eq!(&twice, rho.matrix());
    }

    #[test]
    fn product_state_partial_transpose_keeps_spectrum() {
        let a = DensityMatrix::new(
            ComplexMatrix::new(2, 2, vec![c(0.6), C64::new(0.1, 0.2), C64::new(0.1, -0.2), c(0.4)]).unwrap(),
            vec![2],
        )
        .unwrap();
        let ab = a.tensor(&a);
        let pt = partial_transpose(&ab, &[0]).unwrap();
        let e1 = eigenvalues_unchecked(&pt);
        let e0 = ab.eigenvalues();
        for (x, y) in e0.iter().zip(&e1) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn sigma_z_eigenvalues() {
        let h = HermitianOperator::from_matrix(Pauli::Z.matrix()).unwrap();
        let e = hermitian_eig(&h);
        assert_eq!(e.values, vec![-1.0, 1.0]);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(HermitianOperator::from_matrix(m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn exp_of_zero_and_diagonal() {
        let h = HermitianOperator::from_matrix(Pauli::Z.matrix()).unwrap();
        let e0 = matrix_exp_hermitian(&h, 0.0).unwrap();
        assert!(e0.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);
        let e1 = matrix_exp_hermitian(&h, -1.0).unwrap();
        let expected = ComplexMatrix::diagonal(&[(-1.0f64).exp(), 1.0f64.exp()]);
        assert!(e1.max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn exp_overflow_is_reported() {
        let h = HermitianOperator::from_matrix(Pauli::Z.matrix()).unwrap();
        assert!(matches!(matrix_exp_hermitian(&h, 1e4), Err(Error::Overflow { .. })));
    }

    #[test]
    fn density_matrix_validation() {
        let bad_trace = ComplexMatrix::diagonal(&[0.6, 0.6]);
        assert!(matches!(DensityMatrix::new(bad_trace, vec![2]), Err(Error::NotPhysical(_))));
        let negative = ComplexMatrix::diagonal(&[1.5, -0.5]);
        assert!(matches!(DensityMatrix::new(negative, vec![2]), Err(Error::NotPhysical(_))));
        let wrong_dims = ComplexMatrix::diagonal(&[0.5, 0.5]);
        assert!(matches!(DensityMatrix::new(wrong_dims, vec![2, 2]), Err(Error::DimensionMismatch(_))));
    }
}
