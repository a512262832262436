//! Covariance matrices of local observables and their per-party blocks.

use crate::error::{Error, Result};
use crate::linalg::{partial_trace, tensor_product, ComplexMatrix, DensityMatrix, HermitianOperator, RealMatrix, C64};

const ORTHONORMAL_TOL: f64 = 1e-12;

/// `{(E_jk + E_kj)/√2} ∪ {(−iE_jk + iE_kj)/√2} ∪ {diagonal}`: the `d² − 1`
/// traceless generalized Gell-Mann matrices normalized to `Tr(A²) = 1`.
/// For `d = 2` this is `σ_x/√2, σ_y/√2, σ_z/√2` in that order.
pub fn gell_mann(d: usize) -> Vec<HermitianOperator> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut sym = Vec::new();
    let mut anti = Vec::new();
    for j in 0..d {
        for k in j + 1..d {
            let mut s = ComplexMatrix::zeros(d, d);
            s[(j, k)] = C64::new(h, 0.0);
            s[(k, j)] = C64::new(h, 0.0);
            sym.push(s);
            let mut a = ComplexMatrix::zeros(d, d);
            a[(j, k)] = C64::new(0.0, -h);
            a[(k, j)] = C64::new(0.0, h);
            anti.push(a);
        }
    }
    let diag = (1..d).map(|l| {
        let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
        let mut v = vec![0.0; d];
        v[..l].iter_mut().for_each(|x| *x = norm);
        v[l] = -(l as f64) * norm;
        ComplexMatrix::diagonal(&v)
    });
    sym.into_iter()
        .chain(anti)
        .chain(diag)
        .map(|m| HermitianOperator::new(m, vec![d]).expect("Gell-Mann matrices are Hermitian"))
        .collect()
}

/// Per-party ordered lists of local observables, orthonormal under the
/// trace inner product within each party.
#[derive(Clone, Debug)]
pub struct ObservableBasis {
    parties: Vec<Vec<HermitianOperator>>,
}

impl ObservableBasis {
    pub fn new(parties: Vec<Vec<HermitianOperator>>) -> Result<Self> {
        for (alpha, obs) in parties.iter().enumerate() {
            if obs.is_empty() {
                return Err(Error::InvalidParameter(format!("party {alpha} has no observables")));
            }
            let d = obs[0].matrix().rows();
            for (i, a) in obs.iter().enumerate() {
                if a.matrix().rows() != d {
                    return Err(Error::DimensionMismatch(format!("party {alpha} mixes local dimensions")));
                }
                for (j, b) in obs.iter().enumerate().skip(i) {
                    let ip = a.matrix().trace_product(b.matrix());
                    let target = if i == j { 1.0 } else { 0.0 };
                    if (ip - C64::new(target, 0.0)).norm() > ORTHONORMAL_TOL {
                        return Err(Error::InvalidParameter(format!(
                            "party {alpha}: Tr(A_{i} A_{j}) = {ip}, expected {target}"
                        )));
                    }
                }
            }
        }
        Ok(Self { parties })
    }

    /// Traceless Gell-Mann basis for every party (normalized Paulis for
    /// qubits).
    pub fn standard(dims: &[usize]) -> Self {
        Self { parties: dims.iter().map(|&d| gell_mann(d)).collect() }
    }

    /// Replaces party `alpha`'s observables by `A'_k = Σ_j O_kj A_j` for a
    /// real orthogonal `O`, which keeps the set orthonormal.
    pub fn remixed(&self, alpha: usize, o: &RealMatrix) -> Result<Self> {
        let obs = self.parties.get(alpha).ok_or(Error::IndexOutOfRange { index: alpha, count: self.parties.len() })?;
        if o.nrows() != obs.len() || o.ncols() != obs.len() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} mixing matrix for {} observables",
                o.nrows(),
                o.ncols(),
                obs.len()
            )));
        }
        let d = obs[0].matrix().rows();
        let mixed = (0..obs.len())
            .map(|k| {
                let m = obs
                    .iter()
                    .enumerate()
                    .fold(ComplexMatrix::zeros(d, d), |acc, (j, a)| &acc + &a.matrix().scale_real(o[(k, j)]));
                HermitianOperator::new(m.hermitian_part(), vec![d])
            })
            .collect::<Result<Vec<_>>>()?;
        let mut parties = self.parties.clone();
        parties[alpha] = mixed;
        Self::new(parties)
    }

    pub fn num_parties(&self) -> usize {
        self.parties.len()
    }

    pub fn party(&self, alpha: usize) -> &[HermitianOperator] {
        &self.parties[alpha]
    }

    pub fn local_dims(&self) -> Vec<usize> {
        self.parties.iter().map(|p| p[0].matrix().rows()).collect()
    }
}

/// `γ_kl = ½⟨M_k M_l + M_l M_k⟩ − ⟨M_k⟩⟨M_l⟩` for observables on the full
/// space of `rho`.
pub fn covariance_matrix(rho: &DensityMatrix, obs: &[ComplexMatrix]) -> Result<RealMatrix> {
    let dim = rho.matrix().rows();
    if let Some(bad) = obs.iter().find(|m| m.rows() != dim || m.cols() != dim) {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} observable on a {dim}-dimensional state",
            bad.rows(),
            bad.cols()
        )));
    }
    let means: Vec<f64> = obs.iter().map(|m| rho.expectation(m)).collect();
    let rho_m: Vec<ComplexMatrix> = obs.iter().map(|m| rho.matrix() * m).collect();
    let n = obs.len();
    let mut g = RealMatrix::zeros(n, n);
    for k in 0..n {
        for l in k..n {
            // Re Tr(ρ M_k M_l) is the symmetrized product for Hermitian M.
            let v = rho_m[k].trace_product(&obs[l]).re - means[k] * means[l];
            g[(k, l)] = v;
            g[(l, k)] = v;
        }
    }
    Ok(g)
}

/// Covariance matrix with rows grouped by party.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockCovarianceMatrix {
    block_sizes: Vec<usize>,
    offsets: Vec<usize>,
    local_dims: Vec<usize>,
    data: RealMatrix,
}

impl BlockCovarianceMatrix {
    /// Wraps an existing symmetric matrix. `local_dims[α]` is the Hilbert
    /// space dimension of party `α`.
    pub fn from_parts(data: RealMatrix, block_sizes: Vec<usize>, local_dims: Vec<usize>) -> Result<Self> {
        let total: usize = block_sizes.iter().sum();
        if data.nrows() != total || data.ncols() != total || local_dims.len() != block_sizes.len() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix with blocks {block_sizes:?} and dims {local_dims:?}",
                data.nrows(),
                data.ncols()
            )));
        }
        let asym = crate::linalg::asymmetry(&data);
        if asym > 1e-12 {
            return Err(Error::NotHermitian { deviation: asym });
        }
        let offsets = block_sizes
            .iter()
            .scan(0, |acc, &s| {
                let o = *acc;
                *acc += s;
                Some(o)
            })
            .collect();
        Ok(Self { block_sizes, offsets, local_dims, data })
    }

    pub fn num_parties(&self) -> usize {
        self.block_sizes.len()
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.block_sizes
    }

    pub fn local_dims(&self) -> &[usize] {
        &self.local_dims
    }

    pub fn offset(&self, alpha: usize) -> usize {
        self.offsets[alpha]
    }

    /// Party owning row `row`.
    pub fn party_of(&self, row: usize) -> usize {
        self.offsets.partition_point(|&o| o <= row) - 1
    }

    pub fn data(&self) -> &RealMatrix {
        &self.data
    }

    pub fn block(&self, alpha: usize, beta: usize) -> RealMatrix {
        self.data
            .view((self.offsets[alpha], self.offsets[beta]), (self.block_sizes[alpha], self.block_sizes[beta]))
            .into_owned()
    }

    pub fn is_all_qubits(&self) -> bool {
        self.local_dims.iter().all(|&d| d == 2)
    }
}

/// Block covariance matrix of `rho` in `basis`. Diagonal blocks come from
/// single-party marginals and off-diagonal blocks from two-party marginals,
/// so nothing larger than a pair is ever multiplied.
pub fn block_covariance(rho: &DensityMatrix, basis: &ObservableBasis) -> Result<BlockCovarianceMatrix> {
    let dims = rho.dims();
    if basis.local_dims() != dims {
        return Err(Error::DimensionMismatch(format!(
            "basis for dimensions {:?} applied to a state with {dims:?}",
            basis.local_dims()
        )));
    }
    let n = dims.len();
    let sizes: Vec<usize> = (0..n).map(|a| basis.party(a).len()).collect();
    let total: usize = sizes.iter().sum();
    let mut data = RealMatrix::zeros(total, total);
    let offsets: Vec<usize> = (0..n).map(|a| sizes[..a].iter().sum()).collect();

    let mut means = Vec::with_capacity(n);
    for alpha in 0..n {
        let local = rho.marginal(&[alpha])?;
        let obs: Vec<ComplexMatrix> = basis.party(alpha).iter().map(|a| a.matrix().clone()).collect();
        let g = covariance_matrix(&local, &obs)?;
        data.view_mut((offsets[alpha], offsets[alpha]), (sizes[alpha], sizes[alpha])).copy_from(&g);
        means.push(obs.iter().map(|m| local.expectation(m)).collect::<Vec<f64>>());
    }
    for alpha in 0..n {
        for beta in alpha + 1..n {
            let pair = partial_trace(rho.matrix(), dims, &[alpha, beta])?;
            for (k, a) in basis.party(alpha).iter().enumerate() {
                let rho_a = &pair * &tensor_product(a.matrix(), &ComplexMatrix::identity(dims[beta]));
                for (l, b) in basis.party(beta).iter().enumerate() {
                    let ab = tensor_product(&ComplexMatrix::identity(dims[alpha]), b.matrix());
                    let v = rho_a.trace_product(&ab).re - means[alpha][k] * means[beta][l];
                    data[(offsets[alpha] + k, offsets[beta] + l)] = v;
                    data[(offsets[beta] + l, offsets[alpha] + k)] = v;
                }
            }
        }
    }
    BlockCovarianceMatrix::from_parts(data, sizes, dims.to_vec())
}

/// Block covariance matrix in the standard traceless basis.
pub fn standard_block_covariance(rho: &DensityMatrix) -> Result<BlockCovarianceMatrix> {
    block_covariance(rho, &ObservableBasis::standard(rho.dims()))
}
