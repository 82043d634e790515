//! Checks derived from the convergence theory: fixed points, the one-step
//! recovery window, the necessary conditions for a global minimizer, and an
//! exhaustive oracle for small problems.

use crate::error::{Error, Result};
use crate::numkernel::{
    default_rank_tol, lstsq_on_support, norm2, pseudo_inverse_apply, restricted_least_squares,
    ColumnQr, DenseMatrix, SupportSet,
};
use crate::par::{min_over_range, Execution};

use super::{SolveStatus, SparseSolution, ZERO_TOL};

/// Largest column count accepted by [`brute_force_global_min`].
pub const BRUTE_FORCE_MAX_COLUMNS: usize = 20;

fn residual(a: &DenseMatrix, b: &[f64], x: &[f64]) -> Vec<f64> {
    a.matvec(x).iter().zip(b).map(|(p, q)| p - q).collect()
}

/// True iff one more pass of the scheme leaves `x` unchanged (within `tol`).
///
/// Nonzero entries must clear `λ − tol`, and the least-squares fit on
/// `supp(x)` must reproduce `x` in the ∞-norm.
pub fn is_fixed_point(a: &DenseMatrix, b: &[f64], x: &[f64], lambda: f64, tol: f64) -> bool {
    if x.len() != a.cols() {
        return false;
    }
    let support = SupportSet::of_nonzero(x, ZERO_TOL);
    let large_enough = support.indices().iter().all(|&j| x[j].abs() >= lambda - tol);
    let small_off_support = support.complement(x.len()).iter().all(|&j| x[j].abs() < lambda);
    if !large_enough || !small_off_support {
        return false;
    }
    match restricted_least_squares(a, b, &support) {
        Ok(refit) => refit.iter().zip(x).all(|(r, v)| (r - v).abs() <= tol),
        Err(_) => false,
    }
}

/// `min_{j∈S} |(A†b)_j| ≥ λ > max_{j∉S} |(A†b)_j|`, the window in which the
/// scheme stops after a single refinement with support `S`.
pub fn check_one_step_condition(
    a: &DenseMatrix,
    b: &[f64],
    support: &SupportSet,
    lambda: f64,
) -> Result<bool> {
    let x0 = pseudo_inverse_apply(a, b)?;
    if support.indices().last().is_some_and(|&j| j >= x0.len()) {
        return Err(Error::InvalidParameter("support index out of range".into()));
    }
    let min_on = support
        .indices()
        .iter()
        .map(|&j| x0[j].abs())
        .fold(f64::INFINITY, f64::min);
    let max_off = support
        .complement(x0.len())
        .iter()
        .map(|&j| x0[j].abs())
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(min_on >= lambda && lambda > max_off)
}

/// Necessary conditions for `x` to globally minimize `F` on a system with
/// `‖A‖₂ = 1`: zero entries see correlations `|aⱼᵀ(Ax − b)| ≤ λ`, nonzero
/// entries have `|x_j| ≥ λ` and vanishing correlation.
///
/// Passing does not certify global optimality.
pub fn check_global_min_conditions(
    a: &DenseMatrix,
    b: &[f64],
    x: &[f64],
    lambda: f64,
    tol: f64,
) -> bool {
    if x.len() != a.cols() || b.len() != a.rows() {
        return false;
    }
    let corr = a.tr_matvec(&residual(a, b, x));
    x.iter().zip(&corr).all(|(&xj, &cj)| {
        if xj.abs() <= ZERO_TOL {
            cj.abs() <= lambda + tol
        } else {
            xj.abs() >= lambda - tol && cj.abs() <= tol
        }
    })
}

/// Exhaustive minimizer of `F(x) = ‖Ax − b‖² + λ²‖x‖₀` over all `2ⁿ`
/// supports, for a system already scaled to `‖A‖₂ = 1`.
///
/// Ties go to the smaller support, then to the lexicographically smaller one.
pub fn brute_force_global_min(a: &DenseMatrix, b: &[f64], lambda: f64) -> Result<SparseSolution> {
    brute_force_global_min_with(a, b, lambda, Execution::default())
}

pub fn brute_force_global_min_with(
    a: &DenseMatrix,
    b: &[f64],
    lambda: f64,
    exec: Execution,
) -> Result<SparseSolution> {
    let n = a.cols();
    if n > BRUTE_FORCE_MAX_COLUMNS {
        return Err(Error::TooManyColumns {
            n,
            limit: BRUTE_FORCE_MAX_COLUMNS,
        });
    }
    if !(lambda > 0.0) {
        return Err(Error::InvalidParameter(format!("lambda must be > 0, got {lambda}")));
    }
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "b has {} entries, A has {} rows",
            b.len(),
            a.rows()
        )));
    }
    if a.rows() < n {
        return Err(Error::DimensionMismatch("need rows >= cols".into()));
    }
    ColumnQr::factor(a, SupportSet::full(n).indices()).check_rank(default_rank_tol(a.rows(), n))?;

    let evaluate = |mask: u64| {
        let support = SupportSet::from_mask(mask, n);
        let x = lstsq_on_support(a, b, &support);
        let r = norm2(&residual(a, b, &x));
        let nnz = x.iter().filter(|v| v.abs() > ZERO_TOL).count() as f64;
        (r * r + lambda * lambda * nnz, support, x, r)
    };
    let (objective, _, x, residual_norm) = min_over_range(exec, 1u64 << n, evaluate, |p, q| {
        p.0.total_cmp(&q.0)
            .then(p.1.len().cmp(&q.1.len()))
            .then_with(|| p.1.cmp(&q.1))
    })
    .expect("at least the empty support is evaluated");

    let support = SupportSet::of_nonzero(&x, ZERO_TOL);
    let status = if support.is_empty() {
        SolveStatus::ConvergedToZero
    } else {
        SolveStatus::Converged
    };
    Ok(SparseSolution {
        x,
        support,
        residual_norm,
        objective,
        status,
    })
}
