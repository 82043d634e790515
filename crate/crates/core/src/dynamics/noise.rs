use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::TimeSeries;
use crate::error::{Error, Result};
use crate::numkernel::DenseMatrix;

/// Independent zero-mean Gaussian perturbation with a fixed seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoiseModel {
    pub variance: f64,
    pub seed: u64,
}

impl NoiseModel {
    pub fn new(variance: f64, seed: u64) -> Self {
        Self { variance, seed }
    }

    pub fn with_std_dev(std_dev: f64, seed: u64) -> Self {
        Self {
            variance: std_dev * std_dev,
            seed,
        }
    }

    pub fn std_dev(&self) -> f64 {
        self.variance.sqrt()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.variance >= 0.0) || !self.variance.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "noise variance must be >= 0, got {}",
                self.variance
            )));
        }
        Ok(())
    }
}

/// Box–Muller over a ChaCha8 stream. Both outputs of a pair are used.
struct Normals {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl Normals {
    fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    fn next(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        // u1 in (0, 1] keeps the logarithm finite
        let u1 = 1.0 - self.rng.random::<f64>();
        let u2 = self.rng.random::<f64>();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = std::f64::consts::TAU * u2;
        self.spare = Some(r * theta.sin());
        r * theta.cos()
    }
}

/// A `rows × cols` draw of the perturbation, filled row by row.
pub fn gaussian_noise(rows: usize, cols: usize, noise: &NoiseModel) -> Result<DenseMatrix> {
    noise.validate()?;
    let sd = noise.std_dev();
    let mut normals = Normals::new(noise.seed);
    let data = (0..rows * cols).map(|_| sd * normals.next()).collect();
    DenseMatrix::new(rows, cols, data)
}

/// `series` plus a fresh perturbation; the time grid is unchanged.
pub fn add_gaussian_noise(series: &TimeSeries, noise: &NoiseModel) -> Result<TimeSeries> {
    let eta = gaussian_noise(series.len(), series.dim(), noise)?;
    let states = series.states();
    let noisy = DenseMatrix::from_fn(states.rows(), states.cols(), |i, j| states.get(i, j) + eta.get(i, j));
    TimeSeries::new(series.t0(), series.step(), noisy)
}
