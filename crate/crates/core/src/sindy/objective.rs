//! The ℓ⁰-penalized objective and its majorizing surrogate.

use crate::numkernel::{norm2, spectral_norm_estimate, DenseMatrix};

use super::ZERO_TOL;

fn residual_sq(a: &DenseMatrix, b: &[f64], x: &[f64]) -> f64 {
    let ax = a.matvec(x);
    ax.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum()
}

fn l0(x: &[f64]) -> f64 {
    x.iter().filter(|v| v.abs() > ZERO_TOL).count() as f64
}

/// Divides `A` and `b` by `‖A‖₂`. Returns `(Â, b̂, ‖A‖₂)`.
pub fn normalize_system(a: &DenseMatrix, b: &[f64]) -> (DenseMatrix, Vec<f64>, f64) {
    let scale = spectral_norm_estimate(a);
    let inv = if scale > 0.0 { 1.0 / scale } else { 1.0 };
    (a.scaled(inv), b.iter().map(|v| v * inv).collect(), scale)
}

/// `F(x) = ‖Âx − b̂‖₂² + λ²‖x‖₀` on the system rescaled by `‖A‖₂`.
pub fn objective_value(a: &DenseMatrix, b: &[f64], x: &[f64], lambda: f64) -> f64 {
    let scale = spectral_norm_estimate(a);
    let scale = if scale > 0.0 { scale } else { 1.0 };
    residual_sq(a, b, x) / (scale * scale) + lambda * lambda * l0(x)
}

/// `G(x, y) = ‖Ax − b‖² − ‖A(x − y)‖² + ‖x − y‖² + λ²‖x‖₀`.
///
/// Only a majorizer of `F` when `‖A‖₂ ≤ 1`; pass the normalized system.
pub fn surrogate_value(a: &DenseMatrix, b: &[f64], x: &[f64], y: &[f64], lambda: f64) -> f64 {
    let d: Vec<f64> = x.iter().zip(y).map(|(p, q)| p - q).collect();
    let ad = norm2(&a.matvec(&d));
    residual_sq(a, b, x) - ad * ad + norm2(&d).powi(2) + lambda * lambda * l0(x)
}
