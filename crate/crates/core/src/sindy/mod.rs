//! Sequentially thresholded least squares.
//!
//! Starting from the unrestricted least-squares solution `x⁰ = A†b`, the
//! scheme alternates
//!
//! ```text
//! Sᵏ   = { j : |xᵏ_j| ≥ λ }
//! xᵏ⁺¹ = argmin ‖Ax − b‖₂  subject to supp(x) ⊆ Sᵏ
//! ```
//!
//! until the support stops changing. The supports are nested, so for a
//! full-rank `A` the loop terminates within `n` refinement steps, and every
//! non-stationary step strictly decreases `F(x) = ‖Ax − b‖₂² + λ²‖x‖₀`
//! measured on the system rescaled to `‖A‖₂ = 1`.

mod certificates;
mod objective;
mod ridge;

pub use certificates::{
    brute_force_global_min, brute_force_global_min_with, check_global_min_conditions,
    check_one_step_condition, is_fixed_point, BRUTE_FORCE_MAX_COLUMNS,
};
pub use objective::{normalize_system, objective_value, surrogate_value};
pub use ridge::{augment_ridge, stridge_solve};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkernel::{
    default_rank_tol, lstsq_on_support, norm2, spectral_norm_estimate, ColumnQr, DenseMatrix,
    SupportSet,
};

/// Entries with magnitude at or below this count as zero in `‖x‖₀`.
pub const ZERO_TOL: f64 = 1e-12;
pub const FIXED_POINT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverParams {
    /// Threshold λ > 0.
    pub lambda: f64,
    /// Ridge weight; zero selects the plain scheme.
    pub gamma: f64,
    /// Safety valve on refinement steps; `None` means `n`.
    pub max_iter: Option<usize>,
}

impl SolverParams {
    pub fn new(lambda: f64) -> Self {
        Self {
            lambda,
            gamma: 0.0,
            max_iter: None,
        }
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = Some(max_iter);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0) || !self.lambda.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "lambda must be a positive finite number, got {}",
                self.lambda
            )));
        }
        if !(self.gamma >= 0.0) || !self.gamma.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "gamma must be >= 0, got {}",
                self.gamma
            )));
        }
        if self.max_iter == Some(0) {
            return Err(Error::InvalidParameter("max_iter must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    /// Support became stationary and is non-empty.
    Converged,
    /// Support shrank to the empty set; the solution is zero.
    ConvergedToZero,
    /// No entry of `A†b` reaches λ, so the scheme never starts.
    EmptyInitialSupport,
}

/// Everything the scheme produced, one entry per iterate starting with `x⁰`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterationTrace {
    pub iterates: Vec<Vec<f64>>,
    /// `supports[k] = Sᵏ`, the thresholded support of `iterates[k]`.
    pub supports: Vec<SupportSet>,
    /// `‖Axᵏ − b‖₂` on the caller's (unscaled) system.
    pub residual_norms: Vec<f64>,
    /// `F(xᵏ)` on the system rescaled by `‖A‖₂`.
    pub objective_values: Vec<f64>,
    /// The `‖A‖₂` used for rescaling.
    pub scale: f64,
    pub status: SolveStatus,
    /// Least-squares refinements performed after `x⁰`.
    pub refinement_steps: usize,
}

impl IterationTrace {
    pub fn converged(&self) -> bool {
        self.status != SolveStatus::EmptyInitialSupport
    }

    /// Same as `refinement_steps`; bounded by `n`.
    pub fn iterations_used(&self) -> usize {
        self.refinement_steps
    }

    /// Iterates recorded, `x⁰` included.
    pub fn raw_iterations(&self) -> usize {
        self.iterates.len()
    }

    /// Each support ordered by decreasing magnitude of its iterate, 1-based.
    pub fn supports_by_magnitude(&self) -> Vec<Vec<usize>> {
        self.iterates
            .iter()
            .zip(&self.supports)
            .map(|(x, s)| support_by_magnitude(x, s).into_iter().map(|j| j + 1).collect())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SparseSolution {
    pub x: Vec<f64>,
    pub support: SupportSet,
    pub residual_norm: f64,
    pub objective: f64,
    pub status: SolveStatus,
}

/// `{ j : |x_j| ≥ λ }`. Entries exactly at λ are kept.
pub fn threshold_support(x: &[f64], lambda: f64) -> SupportSet {
    let kept = (0..x.len()).filter(|&j| x[j].abs() >= lambda).collect();
    SupportSet::new(kept, x.len()).expect("indices come from an ordered scan")
}

/// Indices of `support` sorted by decreasing `|x_j|` (ties by index).
pub fn support_by_magnitude(x: &[f64], support: &SupportSet) -> Vec<usize> {
    let mut idx = support.indices().to_vec();
    idx.sort_by(|&i, &j| x[j].abs().total_cmp(&x[i].abs()).then(i.cmp(&j)));
    idx
}

fn check_system(a: &DenseMatrix, b: &[f64]) -> Result<()> {
    if a.rows() < a.cols() {
        return Err(Error::DimensionMismatch(format!(
            "need at least as many rows as columns, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "b has {} entries, A has {} rows",
            b.len(),
            a.rows()
        )));
    }
    if b.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("b".into()));
    }
    Ok(())
}

/// A dictionary checked and factored once, ready for many right-hand sides.
#[derive(Debug, Clone)]
pub struct SindySystem<'a> {
    a: &'a DenseMatrix,
    full: ColumnQr,
    scale: f64,
}

impl<'a> SindySystem<'a> {
    /// Fails on `m < n` or a numerically rank-deficient `A`.
    pub fn new(a: &'a DenseMatrix) -> Result<Self> {
        if a.rows() < a.cols() {
            return Err(Error::DimensionMismatch(format!(
                "need at least as many rows as columns, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        let full = ColumnQr::factor(a, SupportSet::full(a.cols()).indices());
        full.check_rank(default_rank_tol(a.rows(), a.cols()))?;
        Ok(Self {
            a,
            full,
            scale: spectral_norm_estimate(a),
        })
    }

    pub fn matrix(&self) -> &DenseMatrix {
        self.a
    }

    /// `‖A‖₂`, the factor the objective is normalized by.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Runs the plain scheme; a positive `gamma` is rejected since the ridge
    /// variant works on a different matrix.
    pub fn solve(&self, b: &[f64], params: &SolverParams) -> Result<(SparseSolution, IterationTrace)> {
        params.validate()?;
        if params.gamma > 0.0 {
            return Err(Error::InvalidParameter(
                "ridge solves need the augmented system; use sindy_solve".into(),
            ));
        }
        let a = self.a;
        check_system(a, b)?;
        let n = a.cols();
        let lambda = params.lambda;
        let max_iter = params.max_iter.unwrap_or(n);
        let scale = self.scale;

        let residual = |x: &[f64]| {
            let r: Vec<f64> = a.matvec(x).iter().zip(b).map(|(ax, bi)| ax - bi).collect();
            norm2(&r)
        };
        let objective = |res: f64, x: &[f64]| {
            let nnz = x.iter().filter(|v| v.abs() > ZERO_TOL).count() as f64;
            (res / scale).powi(2) + lambda * lambda * nnz
        };

        let x0 = self.full.solve(b);
        let s0 = threshold_support(&x0, lambda);
        let r0 = residual(&x0);
        let mut trace = IterationTrace {
            objective_values: vec![objective(r0, &x0)],
            residual_norms: vec![r0],
            supports: vec![s0],
            iterates: vec![x0],
            scale,
            status: SolveStatus::EmptyInitialSupport,
            refinement_steps: 0,
        };

        if trace.supports[0].is_empty() {
            let x = vec![0.0; n];
            let res = norm2(b);
            let solution = SparseSolution {
                objective: objective(res, &x),
                residual_norm: res,
                support: SupportSet::empty(),
                x,
                status: SolveStatus::EmptyInitialSupport,
            };
            return Ok((solution, trace));
        }

        while trace.refinement_steps < max_iter {
            let current = trace.supports.last().expect("trace is never empty");
            let x = lstsq_on_support(a, b, current);
            let next = threshold_support(&x, lambda);
            let stationary = &next == current;
            let res = residual(&x);
            trace.objective_values.push(objective(res, &x));
            trace.residual_norms.push(res);
            trace.iterates.push(x);
            trace.supports.push(next);
            trace.refinement_steps += 1;

            if stationary {
                let support = trace.supports.last().cloned().unwrap_or_default();
                trace.status = if support.is_empty() {
                    SolveStatus::ConvergedToZero
                } else {
                    SolveStatus::Converged
                };
                let solution = SparseSolution {
                    x: trace.iterates.last().cloned().unwrap_or_default(),
                    support,
                    residual_norm: res,
                    objective: *trace.objective_values.last().unwrap_or(&f64::NAN),
                    status: trace.status,
                };
                return Ok((solution, trace));
            }
        }
        Err(Error::IterationLimit { max_iter })
    }
}

/// Runs the thresholding scheme on `Ax ≈ b`.
///
/// A positive `params.gamma` hands the problem to [`stridge_solve`].
pub fn sindy_solve(
    a: &DenseMatrix,
    b: &[f64],
    params: &SolverParams,
) -> Result<(SparseSolution, IterationTrace)> {
    params.validate()?;
    if params.gamma > 0.0 {
        return stridge_solve(a, b, params);
    }
    check_system(a, b)?;
    SindySystem::new(a)?.solve(b, params)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_keeps_boundary() {
        assert!(threshold_support(&[0.0, 0.0, 0.0], 1.0).is_empty());
        let x = [10.0, 0.95, 0.9, 0.85, 0.8];
        assert_eq!(threshold_support(&x, 0.802).indices(), &[0, 1, 2, 3]);
        assert_eq!(threshold_support(&x, 8.0).indices(), &[0]);
        assert_eq!(threshold_support(&[-0.5, 0.5, 0.4999], 0.5).indices(), &[0, 1]);
    }

    #[test]
    fn params_validation() {
        assert!(SolverParams::new(0.0).validate().is_err());
        assert!(SolverParams::new(f64::NAN).validate().is_err());
        assert!(SolverParams::new(1.0).with_gamma(-1.0).validate().is_err());
        assert!(SolverParams::new(1.0).with_max_iter(0).validate().is_err());
        assert!(SolverParams::new(1.0).with_gamma(0.5).validate().is_ok());
    }

    #[test]
    fn empty_initial_support_is_flagged() {
        let a = DenseMatrix::identity(3);
        let (sol, trace) = sindy_solve(&a, &[0.1, 0.2, 0.3], &SolverParams::new(1.0)).unwrap();
        assert_eq!(sol.status, SolveStatus::EmptyInitialSupport);
        assert_eq!(sol.x, vec![0.0; 3]);
        assert_eq!(trace.refinement_steps, 0);
        assert_eq!(trace.raw_iterations(), 1);
        assert!(!trace.converged());
    }

    #[test]
    fn full_initial_support_converges_in_one_step() {
        let a = DenseMatrix::identity(3);
        let (sol, trace) = sindy_solve(&a, &[2.0, 3.0, 4.0], &SolverParams::new(1.0)).unwrap();
        assert_eq!(sol.status, SolveStatus::Converged);
        assert_eq!(trace.refinement_steps, 1);
        assert_eq!(trace.iterates[0], trace.iterates[1]);
    }

    #[test]
    fn rejects_wide_and_rank_deficient() {
        let wide = DenseMatrix::from_rows(&[vec![1.0, 2.0, 3.0]]).unwrap();
        assert!(matches!(
            sindy_solve(&wide, &[1.0], &SolverParams::new(0.1)),
            Err(Error::DimensionMismatch(_))
        ));
        let dup = DenseMatrix::from_rows(&[vec![1.0, 1.0], vec![2.0, 2.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(
            sindy_solve(&dup, &[1.0, 2.0, 0.0], &SolverParams::new(0.1)),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn iteration_limit_is_reported() {
        // needs 4 refinements; cap at 2
        let a = DenseMatrix::from_rows(&[
            vec![1.0, 0.0, 0.0, 0.0, 0.0],
            vec![-0.1, 0.9, 0.0, 0.0, 0.0],
            vec![-0.1, -0.1, 0.8, 0.0, 0.0],
            vec![-0.1, -0.1, -0.1, 0.7, 0.0],
            vec![-0.1, -0.1, -0.1, -0.1, 0.6],
        ])
        .unwrap();
        let b = a.matvec(&[10.0, 0.95, 0.9, 0.85, 0.8]);
        let params = SolverParams::new(0.802).with_max_iter(2);
        assert_eq!(sindy_solve(&a, &b, &params), Err(Error::IterationLimit { max_iter: 2 }));
    }

    #[test]
    fn converges_to_zero_when_everything_drops() {
        // x⁰ = (1, 1, 0.5); refitting on {0, 1} alone gives (0.5, 0.5)
        let a = DenseMatrix::from_rows(&[vec![1.0, 0.0, -1.0], vec![0.0, 1.0, -1.0], vec![0.0, 0.0, 1.0]])
            .unwrap();
        let b = a.matvec(&[1.0, 1.0, 0.5]);
        let (sol, trace) = sindy_solve(&a, &b, &SolverParams::new(1.0)).unwrap();
        assert_eq!(trace.supports[0].indices(), &[0, 1]);
        assert_eq!(sol.status, SolveStatus::ConvergedToZero);
        assert!(sol.x.iter().all(|&v| v == 0.0));
        assert_eq!(trace.refinement_steps, 2);
    }
}
