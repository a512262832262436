use nalgebra::{DMatrix, DVector};

use crate::error::{Result, SdpError};

/// One entry of a symmetric coefficient matrix. An off-diagonal entry
/// `(row, col)` also sets its mirror `(col, row)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymEntry {
    pub block: usize,
    pub row: usize,
    pub col: usize,
    pub value: f64,
}

impl SymEntry {
    /// Index pairs `(p, q)` with weight 1 that the entry contributes to.
    fn pairs(&self) -> ([(usize, usize); 2], usize) {
        if self.row == self.col {
            ([(self.row, self.row), (self.row, self.row)], 1)
        } else {
            ([(self.row, self.col), (self.col, self.row)], 2)
        }
    }
}

/// Block-diagonal linear matrix inequality maximization:
///
/// ```text
/// maximize    cᵀx
/// subject to  F(x) = F₀ + Σᵢ xᵢ Fᵢ ⪰ 0   (block diagonal)
///             E x = b
/// ```
///
/// `F₀` is stored densely per block; the `Fᵢ` are stored as sparse
/// symmetric entries since the instances produced by the covariance
/// criterion touch only a handful of entries per variable.
#[derive(Clone, Debug, PartialEq)]
pub struct SdpProblem {
    block_sizes: Vec<usize>,
    objective: DVector<f64>,
    constant: Vec<DMatrix<f64>>,
    coefficients: Vec<Vec<SymEntry>>,
    eq_matrix: DMatrix<f64>,
    eq_rhs: DVector<f64>,
}

impl SdpProblem {
    pub fn new(block_sizes: Vec<usize>, num_vars: usize) -> Self {
        let constant = block_sizes.iter().map(|&n| DMatrix::zeros(n, n)).collect();
        Self {
            objective: DVector::zeros(num_vars),
            constant,
            coefficients: vec![Vec::new(); num_vars],
            eq_matrix: DMatrix::zeros(0, num_vars),
            eq_rhs: DVector::zeros(0),
            block_sizes,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_equalities(&self) -> usize {
        self.eq_rhs.len()
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.block_sizes
    }

    /// Total matrix dimension summed over blocks.
    pub fn total_size(&self) -> usize {
        self.block_sizes.iter().sum()
    }

    pub fn objective(&self) -> &DVector<f64> {
        &self.objective
    }

    pub fn constant(&self) -> &[DMatrix<f64>] {
        &self.constant
    }

    pub fn coefficients(&self, var: usize) -> &[SymEntry] {
        &self.coefficients[var]
    }

    pub fn eq_matrix(&self) -> &DMatrix<f64> {
        &self.eq_matrix
    }

    pub fn eq_rhs(&self) -> &DVector<f64> {
        &self.eq_rhs
    }

    fn check_var(&self, var: usize) -> Result<()> {
        if var >= self.num_vars() {
            return Err(SdpError::InvalidProblem(format!(
                "variable {var} out of range ({} variables)",
                self.num_vars()
            )));
        }
        Ok(())
    }

    fn check_entry(&self, block: usize, row: usize, col: usize) -> Result<()> {
        let size = *self
            .block_sizes
            .get(block)
            .ok_or_else(|| SdpError::InvalidProblem(format!("block {block} out of range")))?;
        if row >= size || col >= size {
            return Err(SdpError::InvalidProblem(format!("entry ({row}, {col}) outside block {block} of size {size}")));
        }
        Ok(())
    }

    pub fn set_objective(&mut self, var: usize, value: f64) -> Result<()> {
        self.check_var(var)?;
        self.objective[var] = value;
        Ok(())
    }

    /// Replaces the constant term of one block. The matrix must be symmetric.
    pub fn set_constant_block(&mut self, block: usize, m: DMatrix<f64>) -> Result<()> {
        let size = *self
            .block_sizes
            .get(block)
            .ok_or_else(|| SdpError::InvalidProblem(format!("block {block} out of range")))?;
        if m.nrows() != size || m.ncols() != size {
            return Err(SdpError::InvalidProblem(format!(
                "constant for block {block} is {}x{}, expected {size}x{size}",
                m.nrows(),
                m.ncols()
            )));
        }
        let asym = (&m - m.transpose()).amax();
        if asym > 1e-12 * m.amax().max(1.0) {
            return Err(SdpError::InvalidProblem(format!(
                "constant for block {block} is not symmetric (deviation {asym:e})"
            )));
        }
        self.constant[block] = m;
        Ok(())
    }

    /// Adds `value` to `F₀[block](row, col)` and its mirror.
    pub fn add_constant(&mut self, block: usize, row: usize, col: usize, value: f64) -> Result<()> {
        self.check_entry(block, row, col)?;
        let c = &mut self.constant[block];
        c[(row, col)] += value;
        if row != col {
            c[(col, row)] += value;
        }
        Ok(())
    }

    /// Adds `value` to `F_var[block](row, col)` and its mirror.
    pub fn add_coefficient(&mut self, var: usize, block: usize, row: usize, col: usize, value: f64) -> Result<()> {
        self.check_var(var)?;
        self.check_entry(block, row, col)?;
        let (row, col) = if row <= col { (row, col) } else { (col, row) };
        let entries = &mut self.coefficients[var];
        if let Some(e) = entries.iter_mut().find(|e| e.block == block && e.row == row && e.col == col) {
            e.value += value;
        } else {
            entries.push(SymEntry { block, row, col, value });
        }
        Ok(())
    }

    /// Appends the equality `Σ coeff·x_var = rhs`.
    pub fn add_equality(&mut self, terms: &[(usize, f64)], rhs: f64) -> Result<()> {
        for &(var, _) in terms {
            self.check_var(var)?;
        }
        let m = self.num_vars();
        let p = self.num_equalities();
        let mut e = DMatrix::zeros(p + 1, m);
        e.rows_mut(0, p).copy_from(&self.eq_matrix);
        for &(var, coeff) in terms {
            e[(p, var)] += coeff;
        }
        self.eq_matrix = e;
        self.eq_rhs = self.eq_rhs.push(rhs);
        Ok(())
    }

    /// `F(x)` per block.
    pub fn evaluate(&self, x: &DVector<f64>) -> Vec<DMatrix<f64>> {
        let mut out = self.constant.clone();
        self.accumulate_linear(x, &mut out);
        out
    }

    /// `Σ xᵢ Fᵢ` per block (no constant term).
    pub fn apply_linear(&self, x: &DVector<f64>) -> Vec<DMatrix<f64>> {
        let mut out: Vec<_> = self.block_sizes.iter().map(|&n| DMatrix::zeros(n, n)).collect();
        self.accumulate_linear(x, &mut out);
        out
    }

    fn accumulate_linear(&self, x: &DVector<f64>, out: &mut [DMatrix<f64>]) {
        for (xi, entries) in x.iter().zip(&self.coefficients) {
            if *xi == 0.0 {
                continue;
            }
            for e in entries {
                let b = &mut out[e.block];
                b[(e.row, e.col)] += xi * e.value;
                if e.row != e.col {
                    b[(e.col, e.row)] += xi * e.value;
                }
            }
        }
    }

    /// Adjoint map: `(Tr(Fᵢ Z))ᵢ`.
    pub fn adjoint(&self, z: &[DMatrix<f64>]) -> DVector<f64> {
        DVector::from_iterator(
            self.num_vars(),
            self.coefficients.iter().map(|entries| {
                entries
                    .iter()
                    .map(|e| {
                        let zb = &z[e.block];
                        if e.row == e.col {
                            e.value * zb[(e.row, e.row)]
                        } else {
                            e.value * (zb[(e.row, e.col)] + zb[(e.col, e.row)])
                        }
                    })
                    .sum()
            }),
        )
    }

    /// Schur matrix `M_ij = Tr(Fᵢ W Fⱼ W)` for a symmetric block matrix `W`.
    pub fn schur(&self, w: &[DMatrix<f64>]) -> DMatrix<f64> {
        let m = self.num_vars();
        let mut out = DMatrix::zeros(m, m);
        for i in 0..m {
            for j in i..m {
                let mut acc = 0.0;
                for ei in &self.coefficients[i] {
                    let (pi, ni) = ei.pairs();
                    for ej in self.coefficients[j].iter().filter(|e| e.block == ei.block) {
                        let wb = &w[ei.block];
                        let (pj, nj) = ej.pairs();
                        let mut s = 0.0;
                        for &(p, q) in &pi[..ni] {
                            for &(r, t) in &pj[..nj] {
                                s += wb[(q, r)] * wb[(t, p)];
                            }
                        }
                        acc += ei.value * ej.value * s;
                    }
                }
                out[(i, j)] = acc;
                out[(j, i)] = acc;
            }
        }
        out
    }

    /// Multiplies `F₀` and every `Fᵢ` by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        for c in &mut out.constant {
            *c *= s;
        }
        for entries in &mut out.coefficients {
            for e in entries {
                e.value *= s;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_coefficient(p: &SdpProblem, var: usize) -> Vec<DMatrix<f64>> {
        let mut x = DVector::zeros(p.num_vars());
        x[var] = 1.0;
        p.apply_linear(&x)
    }

    fn sample() -> SdpProblem {
        let mut p = SdpProblem::new(vec![3, 2], 3);
        p.add_coefficient(0, 0, 0, 1, 0.5).unwrap();
        p.add_coefficient(0, 1, 1, 1, -1.0).unwrap();
        p.add_coefficient(1, 0, 2, 2, 2.0).unwrap();
        p.add_coefficient(1, 0, 2, 0, 1.5).unwrap();
        p.add_coefficient(2, 0, 1, 1, 1.0).unwrap();
        p.add_coefficient(2, 1, 0, 1, 0.25).unwrap();
        p
    }

    #[test]
    fn schur_matches_dense_traces() {
        let p = sample();
        let w = vec![
            DMatrix::from_row_slice(3, 3, &[2.0, 0.3, -0.1, 0.3, 1.5, 0.2, -0.1, 0.2, 1.0]),
            DMatrix::from_row_slice(2, 2, &[1.0, 0.4, 0.4, 0.7]),
        ];
        let m = p.schur(&w);
        for i in 0..3 {
            for j in 0..3 {
                let fi = dense_coefficient(&p, i);
                let fj = dense_coefficient(&p, j);
                let dense: f64 = (0..2).map(|b| (&fi[b] * &w[b] * &fj[b] * &w[b]).trace()).sum();
                assert!((m[(i, j)] - dense).abs() < 1e-12, "({i},{j})");
            }
        }
    }

    #[test]
    fn adjoint_matches_dense_traces() {
        let p = sample();
        let z = vec![
            DMatrix::from_row_slice(3, 3, &[1.0, 0.2, 0.3, 0.2, 2.0, -0.5, 0.3, -0.5, 0.5]),
            DMatrix::from_row_slice(2, 2, &[0.1, 0.9, 0.9, 0.3]),
        ];
        let a = p.adjoint(&z);
        for i in 0..3 {
            let fi = dense_coefficient(&p, i);
            let dense: f64 = (0..2).map(|b| (&fi[b] * &z[b]).trace()).sum();
            assert!((a[i] - dense).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_out_of_range_entries() {
        let mut p = SdpProblem::new(vec![2], 1);
        assert!(p.add_coefficient(1, 0, 0, 0, 1.0).is_err());
        assert!(p.add_coefficient(0, 1, 0, 0, 1.0).is_err());
        assert!(p.add_coefficient(0, 0, 2, 0, 1.0).is_err());
        assert!(p.set_constant_block(0, DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0])).is_err());
    }
}
