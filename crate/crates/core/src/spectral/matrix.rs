//! Dense symmetric eigenvalues for order-2 tensors, used as an independent
//! reference for the k = 2 case.

use nalgebra::DMatrix;

use super::SpectralError;
use crate::tensor::{DenseTensor, TensorError};

/// Eigenvalues of a symmetric matrix, ascending.
pub fn symmetric_eigenvalues(t: &DenseTensor) -> Result<Vec<f64>, SpectralError> {
    if t.order() != 2 {
        return Err(SpectralError::OrderMismatch(format!(
            "expected a matrix, got order {}",
            t.order()
        )));
    }
    if !t.is_symmetric(0.0) {
        return Err(TensorError::DimensionMismatch("matrix is not symmetric".into()).into());
    }
    let n = t.dim();
    let m = DMatrix::from_row_slice(n, n, t.data());
    let mut eig: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}
