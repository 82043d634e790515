//! Dense linear-algebra kernels used by the thresholding scheme.
//!
//! Matrices are stored row-major. Least-squares problems are solved with a
//! Householder QR of the (selected) columns; the normal equations are never
//! formed. The spectral norm comes from power iteration on `AᵀA` with a fixed
//! start vector, so results are reproducible without an RNG.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_SPECTRAL_TOL: f64 = 1e-10;
pub const DEFAULT_SPECTRAL_MAX_ITER: usize = 10_000;

/// Relative singular-value cutoff used when no explicit tolerance is given.
///
/// `max(m, n) * eps`, the usual LAPACK/numpy convention. Polynomial
/// dictionaries of moderate order routinely reach condition numbers around
/// 1e10 while still being numerically full rank.
pub fn default_rank_tol(rows: usize, cols: usize) -> f64 {
    rows.max(cols) as f64 * f64::EPSILON
}

/// Real `rows × cols` matrix, row-major, all entries finite.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!(
                "matrix must be at least 1x1, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!(
                "matrix entry ({}, {})",
                pos / cols,
                pos % cols
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch(format!(
                "row {bad} has {} entries, expected {cols}",
                rows[bad].len()
            )));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    /// Builds a matrix from `f(i, j)`. Panics if `f` produces a non-finite value.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::new(rows, cols, data).expect("from_fn produced an invalid matrix")
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// `A x`
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols, "matvec: length mismatch");
        (0..self.rows).map(|i| dot(self.row(i), x)).collect()
    }

    /// `Aᵀ y`
    pub fn tr_matvec(&self, y: &[f64]) -> Vec<f64> {
        assert_eq!(y.len(), self.rows, "tr_matvec: length mismatch");
        let mut out = vec![0.0; self.cols];
        for (i, &yi) in y.iter().enumerate() {
            if yi == 0.0 {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o += a * yi;
            }
        }
        out
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.rows, cols.len(), |i, k| self.get(i, cols[k]))
    }

    /// Stacks `self` on top of `below`.
    pub fn vstack(&self, below: &DenseMatrix) -> Result<Self> {
        if self.cols != below.cols {
            return Err(Error::DimensionMismatch(format!(
                "vstack: {} vs {} columns",
                self.cols, below.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&below.data);
        Ok(Self {
            rows: self.rows + below.rows,
            cols: self.cols,
            data,
        })
    }

    fn columns_major(&self, cols: &[usize]) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.rows * cols.len());
        for &j in cols {
            out.extend((0..self.rows).map(|i| self.get(i, j)));
        }
        out
    }
}

/// Strictly increasing set of column indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct SupportSet(Vec<usize>);

impl SupportSet {
    /// Validates that `indices` is strictly increasing and bounded by `n`.
    pub fn new(indices: Vec<usize>, n: usize) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(
                "support indices must be strictly increasing".into(),
            ));
        }
        if let Some(&bad) = indices.iter().find(|&&j| j >= n) {
            return Err(Error::InvalidParameter(format!(
                "support index {bad} out of range for {n} columns"
            )));
        }
        Ok(Self(indices))
    }

    /// Sorts and deduplicates before validating the bound.
    pub fn from_unsorted(indices: impl IntoIterator<Item = usize>, n: usize) -> Result<Self> {
        let mut v: Vec<usize> = indices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Self::new(v, n)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn full(n: usize) -> Self {
        Self((0..n).collect())
    }

    /// `{ j : |x_j| > zero_tol }`
    pub fn of_nonzero(x: &[f64], zero_tol: f64) -> Self {
        Self(
            x.iter()
                .enumerate()
                .filter(|(_, v)| v.abs() > zero_tol)
                .map(|(j, _)| j)
                .collect(),
        )
    }

    pub(crate) fn from_mask(mask: u64, n: usize) -> Self {
        Self((0..n).filter(|&j| mask >> j & 1 == 1).collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.0.binary_search(&j).is_ok()
    }

    pub fn is_subset_of(&self, other: &SupportSet) -> bool {
        self.0.iter().all(|&j| other.contains(j))
    }

    pub fn complement(&self, n: usize) -> Vec<usize> {
        (0..n).filter(|&j| !self.contains(j)).collect()
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.0.iter().map(|j| j + 1).collect()
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

/// Householder QR of a column subset, kept in compact form.
#[derive(Debug, Clone)]
pub(crate) struct ColumnQr {
    m: usize,
    n: usize,
    /// column-major; Householder vectors on and below the diagonal, R above
    qr: Vec<f64>,
    rdiag: Vec<f64>,
    betas: Vec<f64>,
}

impl ColumnQr {
    pub(crate) fn factor(a: &DenseMatrix, cols: &[usize]) -> Self {
        let m = a.rows();
        let n = cols.len();
        let mut qr = a.columns_major(cols);
        let mut rdiag = vec![0.0; n];
        let mut betas = vec![0.0; n];
        for k in 0..n.min(m) {
            let (head, tail) = qr.split_at_mut((k + 1) * m);
            let v = &mut head[k * m + k..(k + 1) * m];
            let norm = norm2(v);
            if norm == 0.0 {
                continue;
            }
            let alpha = if v[0] > 0.0 { -norm } else { norm };
            v[0] -= alpha;
            let vtv = dot(v, v);
            let beta = 2.0 / vtv;
            for j in 0..n - k - 1 {
                let col = &mut tail[j * m + k..(j + 1) * m];
                let s = beta * dot(v, col);
                for (c, vi) in col.iter_mut().zip(v.iter()) {
                    *c -= s * vi;
                }
            }
            rdiag[k] = alpha;
            betas[k] = beta;
        }
        Self {
            m,
            n,
            qr,
            rdiag,
            betas,
        }
    }

    /// `σ_min(R) / σ_max(R)`, which equals the same ratio for the factored columns.
    pub(crate) fn singular_value_ratio(&self) -> f64 {
        if self.n == 0 {
            return 1.0;
        }
        if self.m < self.n {
            return 0.0;
        }
        let n = self.n;
        let r = DMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Less => self.qr[j * self.m + i],
            std::cmp::Ordering::Equal => self.rdiag[i],
            std::cmp::Ordering::Greater => 0.0,
        });
        let sv = r.singular_values();
        let max = sv.max();
        if max == 0.0 {
            0.0
        } else {
            sv.min() / max
        }
    }

    pub(crate) fn check_rank(&self, tol: f64) -> Result<()> {
        let ratio = self.singular_value_ratio();
        if ratio > tol {
            Ok(())
        } else {
            Err(Error::RankDeficient { ratio, tol })
        }
    }

    /// Least-squares coefficients for the factored columns.
    pub(crate) fn solve(&self, b: &[f64]) -> Vec<f64> {
        let (m, n) = (self.m, self.n);
        let mut y = b.to_vec();
        for k in 0..n.min(m) {
            if self.betas[k] == 0.0 {
                continue;
            }
            let v = &self.qr[k * m + k..(k + 1) * m];
            let s = self.betas[k] * dot(v, &y[k..]);
            for (yi, vi) in y[k..].iter_mut().zip(v) {
                *yi -= s * vi;
            }
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut acc = y[i];
            for j in i + 1..n {
                acc -= self.qr[j * m + i] * x[j];
            }
            x[i] = acc / self.rdiag[i];
        }
        x
    }
}

/// Least squares over the columns in `support`, scattered back into an
/// `n`-vector. No rank check; callers establish it beforehand.
pub(crate) fn lstsq_on_support(a: &DenseMatrix, b: &[f64], support: &SupportSet) -> Vec<f64> {
    let mut x = vec![0.0; a.cols()];
    if support.is_empty() {
        return x;
    }
    let coeffs = ColumnQr::factor(a, support.indices()).solve(b);
    for (&j, c) in support.indices().iter().zip(coeffs) {
        x[j] = c;
    }
    x
}

fn check_rhs(a: &DenseMatrix, b: &[f64]) -> Result<()> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has {} entries, matrix has {} rows",
            b.len(),
            a.rows()
        )));
    }
    if b.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("right-hand side".into()));
    }
    Ok(())
}

/// Largest singular value of `a` by power iteration on `AᵀA`.
///
/// Starts from the normalized all-ones vector (falling back to the unit
/// vector of the heaviest column if that start lies in the null space). The
/// estimates increase geometrically towards `‖A‖₂`; iteration stops once the
/// remaining gap, extrapolated from the last two increments, is below `tol`
/// relative, or once increments reach rounding level.
pub fn spectral_norm(a: &DenseMatrix, tol: f64, max_iter: usize) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tol must be > 0, got {tol}")));
    }
    let n = a.cols();
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let mut sigma = norm2(&a.matvec(&v));
    if sigma == 0.0 {
        let heaviest = (0..n)
            .map(|j| (j, norm2(&a.column(j))))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .map(|(j, _)| j)
            .unwrap_or(0);
        v = vec![0.0; n];
        v[heaviest] = 1.0;
        sigma = norm2(&a.matvec(&v));
        if sigma == 0.0 {
            return Ok(0.0);
        }
    }
    let mut last_step = f64::NAN;
    for _ in 0..max_iter {
        let w = a.tr_matvec(&a.matvec(&v));
        let wn = norm2(&w);
        if wn == 0.0 {
            return Ok(sigma);
        }
        v = w.into_iter().map(|x| x / wn).collect();
        let next = norm2(&a.matvec(&v));
        let step = (next - sigma).abs();
        if step <= 4.0 * f64::EPSILON * next {
            return Ok(next);
        }
        let ratio = step / last_step;
        if ratio < 1.0 && step / (1.0 - ratio) <= 0.1 * tol * next {
            return Ok(next);
        }
        last_step = step;
        sigma = next;
    }
    Err(Error::SpectralNormNotConverged {
        estimate: sigma,
        iterations: max_iter,
    })
}

/// Power-iteration estimate with the default settings; a non-converged run
/// still yields its best estimate.
pub(crate) fn spectral_norm_estimate(a: &DenseMatrix) -> f64 {
    match spectral_norm(a, DEFAULT_SPECTRAL_TOL, DEFAULT_SPECTRAL_MAX_ITER) {
        Ok(s) => s,
        Err(Error::SpectralNormNotConverged { estimate, .. }) => estimate,
        Err(e) => unreachable!("default spectral norm settings rejected: {e}"),
    }
}

/// True iff `σ_min(A) > tol · σ_max(A)`.
pub fn column_rank_full(a: &DenseMatrix, tol: f64) -> bool {
    a.rows() >= a.cols() && ColumnQr::factor(a, &SupportSet::full(a.cols()).0).singular_value_ratio() > tol
}

/// `A†b` for a full-column-rank `A` with `m ≥ n`.
pub fn pseudo_inverse_apply(a: &DenseMatrix, b: &[f64]) -> Result<Vec<f64>> {
    if a.rows() < a.cols() {
        return Err(Error::DimensionMismatch(format!(
            "need rows >= cols, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    restricted_least_squares(a, b, &SupportSet::full(a.cols()))
}

/// `argmin ‖Ax − b‖₂` over vectors supported on `support`; zero elsewhere.
pub fn restricted_least_squares(a: &DenseMatrix, b: &[f64], support: &SupportSet) -> Result<Vec<f64>> {
    check_rhs(a, b)?;
    if let Some(&j) = support.indices().last() {
        if j >= a.cols() {
            return Err(Error::InvalidParameter(format!(
                "support index {j} out of range for {} columns",
                a.cols()
            )));
        }
    }
    let mut x = vec![0.0; a.cols()];
    if support.is_empty() {
        return Ok(x);
    }
    let qr = ColumnQr::factor(a, support.indices());
    qr.check_rank(default_rank_tol(a.rows(), support.len()))?;
    for (&j, c) in support.indices().iter().zip(qr.solve(b)) {
        x[j] = c;
    }
    Ok(x)
}
