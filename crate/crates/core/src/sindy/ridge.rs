//! Sequential threshold ridge regression via the augmented system
//! `[A; γI] x ≈ [b; 0]`.

use crate::error::{Error, Result};
use crate::numkernel::DenseMatrix;

use super::{sindy_solve, IterationTrace, SolverParams, SparseSolution};

/// `(Ã, b̃) = ([A; γI], [b; 0])`.
pub fn augment_ridge(a: &DenseMatrix, b: &[f64], gamma: f64) -> Result<(DenseMatrix, Vec<f64>)> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "b has {} entries, A has {} rows",
            b.len(),
            a.rows()
        )));
    }
    let ridge = DenseMatrix::identity(a.cols()).scaled(gamma);
    let stacked = a.vstack(&ridge)?;
    let mut rhs = b.to_vec();
    rhs.resize(a.rows() + a.cols(), 0.0);
    Ok((stacked, rhs))
}

/// Thresholding on the ridge-augmented system. `A` need not be injective
/// or tall since `γI` makes `Ã` both.
pub fn stridge_solve(
    a: &DenseMatrix,
    b: &[f64],
    params: &SolverParams,
) -> Result<(SparseSolution, IterationTrace)> {
    params.validate()?;
    if !(params.gamma > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "ridge weight must be > 0, got {}",
            params.gamma
        )));
    }
    let (aug, rhs) = augment_ridge(a, b, params.gamma)?;
    sindy_solve(&aug, &rhs, &SolverParams { gamma: 0.0, ..*params })
}
