//! Simulation side of the identification pipeline: benchmark vector fields,
//! fixed-step RK4, seeded Gaussian perturbation, finite-difference
//! derivatives and the error metrics used to score a recovered model.

mod derivative;
mod integrate;
mod metrics;
mod noise;
mod systems;

pub use derivative::finite_difference_derivative;
pub use integrate::rk4_integrate;
pub use metrics::{relative_error, snr};
pub use noise::{add_gaussian_noise, gaussian_noise, NoiseModel};
pub use systems::{lorenz_rhs, thomas_rhs, CustomSystem, SystemId, VectorField};

use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::numkernel::DenseMatrix;

/// Samples on the uniform grid `t0 + k·h`, one state per row.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    t0: f64,
    h: f64,
    states: DenseMatrix,
}

impl TimeSeries {
    pub fn new(t0: f64, h: f64, states: DenseMatrix) -> Result<Self> {
        if !(h > 0.0) || !h.is_finite() || !t0.is_finite() {
            return Err(Error::InvalidParameter(format!("invalid time grid t0={t0}, h={h}")));
        }
        Ok(Self { t0, h, states })
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn step(&self) -> f64 {
        self.h
    }

    pub fn states(&self) -> &DenseMatrix {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        self.states.cols()
    }

    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.h
    }

    pub fn last_state(&self) -> &[f64] {
        self.states.row(self.len() - 1)
    }

    /// Header `t,u1,…,ud`, then one row per sample. Floats use the shortest
    /// representation that parses back to the same value.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let header: Vec<String> = std::iter::once("t".to_string())
            .chain((1..=self.dim()).map(|i| format!("u{i}")))
            .collect();
        writeln!(out, "{}", header.join(","))?;
        for k in 0..self.len() {
            write!(out, "{:?}", self.time(k))?;
            for v in self.states.row(k) {
                write!(out, ",{v:?}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}
