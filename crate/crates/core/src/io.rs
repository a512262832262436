//! Density-matrix files: `{"dims": [..], "entries": [[re, im], ...]}` with
//! entries in row-major order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityMatrix, C64};

#[derive(Debug, Serialize, Deserialize)]
struct DensityFile {
    dims: Vec<usize>,
    entries: Vec<[f64; 2]>,
}

/// Parses and validates a density matrix. Physical-validity failures carry
/// the violated bound.
pub fn density_from_json(text: &str) -> Result<DensityMatrix> {
    let f: DensityFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let dim: usize = f.dims.iter().product();
    if f.dims.is_empty() || f.entries.len() != dim * dim {
        return Err(Error::DimensionMismatch(format!(
            "dims {:?} need {} entries, file has {}",
            f.dims,
            dim * dim,
            f.entries.len()
        )));
    }
    let data = f.entries.iter().map(|&[re, im]| C64::new(re, im)).collect();
    DensityMatrix::new(ComplexMatrix::new(dim, dim, data)?, f.dims)
}

pub fn density_to_json(rho: &DensityMatrix) -> String {
    let f =
        DensityFile { dims: rho.dims().to_vec(), entries: rho.matrix().data().iter().map(|c| [c.re, c.im]).collect() };
    serde_json::to_string(&f).expect("density file serializes")
}
