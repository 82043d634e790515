use super::TimeSeries;
use crate::error::{Error, Result};
use crate::numkernel::DenseMatrix;

/// Derivative estimate on the sample grid: a forward difference at the
/// first sample, a backward difference at the last, and central
/// differences in between.
pub fn finite_difference_derivative(series: &TimeSeries) -> Result<DenseMatrix> {
    let t = series.len();
    if t < 3 {
        return Err(Error::InvalidParameter(format!(
            "finite differences need at least 3 samples, got {t}"
        )));
    }
    let u = series.states();
    let h = series.step();
    Ok(DenseMatrix::from_fn(t, series.dim(), |k, j| match k {
        0 => (u.get(1, j) - u.get(0, j)) / h,
        k if k == t - 1 => (u.get(k, j) - u.get(k - 1, j)) / h,
        k => (u.get(k + 1, j) - u.get(k - 1, j)) / (2.0 * h),
    }))
}
