#![allow(dead_code)]

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sindy_core::numkernel::{pseudo_inverse_apply, DenseMatrix};

pub struct Instance {
    pub a: DenseMatrix,
    pub b: Vec<f64>,
    pub lambda: f64,
}

/// Uniform entries in [-1, 1).
pub fn random_matrix(rng: &mut ChaCha8Rng, m: usize, n: usize) -> DenseMatrix {
    DenseMatrix::from_fn(m, n, |_, _| rng.random_range(-1.0..1.0))
}

/// `b = A x + noise` for a random sparse `x`, with λ drawn between 10% and
/// 90% of `max |A†b|` so that the scheme starts from a non-empty support.
pub fn instance(seed: u64, rows: (usize, usize), cols: (usize, usize)) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = rng.random_range(rows.0..=rows.1);
    let n = rng.random_range(cols.0..=cols.1.min(m));
    let a = random_matrix(&mut rng, m, n);
    let k = rng.random_range(1..=n);
    let mut x = vec![0.0; n];
    for j in sample(&mut rng, n, k) {
        let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        x[j] = sign * rng.random_range(0.5..2.0);
    }
    let b: Vec<f64> = a.matvec(&x).into_iter().map(|v| v + 0.1 * rng.random_range(-1.0..1.0)).collect();
    let x0 = pseudo_inverse_apply(&a, &b).expect("random matrices are full rank");
    let top = x0.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let lambda = rng.random_range(0.1..0.9) * top;
    Instance { a, b, lambda }
}

pub fn example1() -> (DenseMatrix, Vec<f64>) {
    sindy_core::reproduce::example1_system()
}

pub fn example2() -> (DenseMatrix, Vec<f64>) {
    sindy_core::reproduce::example2_system()
}

pub fn assert_close(actual: &[f64], expected: &[f64], tol: f64) {
    assert_eq!(actual.len(), expected.len(), "length mismatch");
    for (j, (a, e)) in actual.iter().zip(expected).enumerate() {
        assert!((a - e).abs() <= tol, "entry {j}: {a} vs {e} (tol {tol})\nactual   {actual:?}\nexpected {expected:?}");
    }
}

/// `‖Ax − b‖² + λ²·nnz(x)` evaluated directly, no rescaling.
pub fn raw_objective(a: &DenseMatrix, b: &[f64], x: &[f64], lambda: f64) -> f64 {
    let r: f64 = a.matvec(x).iter().zip(b).map(|(p, q)| (p - q).powi(2)).sum();
    r + lambda * lambda * x.iter().filter(|v| v.abs() > 1e-12).count() as f64
}
