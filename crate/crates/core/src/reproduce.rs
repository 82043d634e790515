//! Embedded fixtures for the worked examples and benchmark experiments,
//! each compared against its reference values with an explicit tolerance.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkernel::{DenseMatrix, SupportSet};
use crate::pipeline::{identify, Benchmark, IdentifyConfig};
use crate::sindy::{check_one_step_condition, sindy_solve, IterationTrace, SolverParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReproduceCase {
    Example1Onestep,
    Example1Fullpath,
    Example2,
    Table1,
    Lorenz,
    Thomas,
}

impl ReproduceCase {
    pub const ALL: [ReproduceCase; 6] = [
        ReproduceCase::Example1Onestep,
        ReproduceCase::Example1Fullpath,
        ReproduceCase::Example2,
        ReproduceCase::Table1,
        ReproduceCase::Lorenz,
        ReproduceCase::Thomas,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ReproduceCase::Example1Onestep => "example1_onestep",
            ReproduceCase::Example1Fullpath => "example1_fullpath",
            ReproduceCase::Example2 => "example2",
            ReproduceCase::Table1 => "table1",
            ReproduceCase::Lorenz => "lorenz",
            ReproduceCase::Thomas => "thomas",
        }
    }
}

impl fmt::Display for ReproduceCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ReproduceCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Self::ALL.iter().map(|c| c.name()).collect();
            Error::InvalidParameter(format!("unknown case '{s}', expected one of {}", names.join(", ")))
        })
    }
}

/// One compared quantity; passes when `|actual − expected| ≤ tol`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: f64,
    pub actual: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, expected: f64, actual: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            expected,
            actual,
            tol,
            pass: (actual - expected).abs() <= tol,
        }
    }

    /// A yes/no condition encoded as 1/0 with zero tolerance.
    pub fn flag(name: impl Into<String>, holds: bool) -> Self {
        Self::new(name, 1.0, if holds { 1.0 } else { 0.0 }, 0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Reproduction {
    pub case: ReproduceCase,
    /// Human-readable account of what was run.
    pub log: Vec<String>,
    pub checks: Vec<Check>,
}

impl Reproduction {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Lower-triangular 5×5 system with `b = A·(10, 0.95, 0.9, 0.85, 0.8)`.
pub fn example1_system() -> (DenseMatrix, Vec<f64>) {
    let a = DenseMatrix::from_rows(&[
        vec![1.0, 0.0, 0.0, 0.0, 0.0],
        vec![-0.1, 0.9, 0.0, 0.0, 0.0],
        vec![-0.1, -0.1, 0.8, 0.0, 0.0],
        vec![-0.1, -0.1, -0.1, 0.7, 0.0],
        vec![-0.1, -0.1, -0.1, -0.1, 0.6],
    ])
    .expect("fixture is valid");
    let b = a.matvec(&[10.0, 0.95, 0.9, 0.85, 0.8]);
    (a, b)
}

pub const EXAMPLE2_NOISE: [f64; 10] = [0.23, 0.08, -0.01, -0.02, 0.04, -0.28, -0.32, 0.09, 0.30, 0.63];

/// 10×10 integer matrix with `b = A·(1, 1, 1, 0, …, 0) + η`, `η` as printed.
pub fn example2_system() -> (DenseMatrix, Vec<f64>) {
    let rows: [[f64; 10]; 10] = [
        [4., 5., 1., 6., 8., 4., 6., 6., 2., 7.],
        [6., 5., 7., 5., 3., 3., 2., 5., 9., 2.],
        [1., 5., 1., 7., 4., 8., 1., 3., 9., 7.],
        [10., 2., 9., 5., 5., 10., 0., 8., 1., 2.],
        [9., 9., 3., 9., 6., 4., 3., 7., 1., 4.],
        [10., 1., 7., 8., 7., 4., 10., 3., 3., 6.],
        [2., 4., 4., 5., 6., 9., 1., 9., 1., 9.],
        [2., 5., 1., 3., 6., 3., 10., 7., 2., 1.],
        [1., 1., 1., 3., 10., 4., 4., 4., 5., 1.],
        [6., 5., 1., 4., 2., 5., 1., 5., 1., 8.],
    ];
    let a = DenseMatrix::from_rows(&rows.map(Vec::from)).expect("fixture is valid");
    let mut x = [0.0; 10];
    x[..3].fill(1.0);
    let b = a.matvec(&x).iter().zip(EXAMPLE2_NOISE).map(|(v, e)| v + e).collect();
    (a, b)
}

const EXAMPLE1_ONESTEP: [f64; 5] = [9.7981, 0.0, 0.0, 0.0, 0.0];

const EXAMPLE1_PATH: [[f64; 5]; 5] = [
    [10.0, 0.95, 0.9, 0.85, 0.8],
    [9.9366, 0.8725, 0.8031, 0.7255, 0.0],
    [9.8869, 0.8117, 0.7271, 0.0, 0.0],
    [9.8417, 0.7566, 0.0, 0.0, 0.0],
    [9.7981, 0.0, 0.0, 0.0, 0.0],
];

const EXAMPLE2_X1: [f64; 10] = [1.06, 1.08, 0.96, -0.10, 0.04, 0.0, 0.0, -0.03, 0.0, 0.0];
const EXAMPLE2_X2: [f64; 10] = [1.04, 1.01, 0.94, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0];

fn fmt_vec(x: &[f64]) -> String {
    let parts: Vec<String> = x.iter().map(|v| format!("{v:.4}")).collect();
    format!("({})", parts.join(", "))
}

fn log_trace(log: &mut Vec<String>, trace: &IterationTrace) {
    let ordered = trace.supports_by_magnitude();
    for (k, x) in trace.iterates.iter().enumerate() {
        log.push(format!(
            "x^{k} = {}  S^{k} = {:?}  F = {:.4}",
            fmt_vec(x),
            ordered[k],
            trace.objective_values[k]
        ));
    }
}

fn compare_vec(checks: &mut Vec<Check>, label: &str, expected: &[f64], actual: &[f64], tol: f64) {
    for (j, (e, a)) in expected.iter().zip(actual).enumerate() {
        checks.push(Check::new(format!("{label}[{}]", j + 1), *e, *a, tol));
    }
}

/// Runs `case`. `seed` replaces the noise seed of the benchmark cases.
pub fn reproduce(case: ReproduceCase, seed: Option<u64>) -> Result<Reproduction> {
    let mut log = Vec::new();
    let mut checks = Vec::new();
    match case {
        ReproduceCase::Example1Onestep => {
            let (a, b) = example1_system();
            let s = SupportSet::new(vec![0], 5)?;
            checks.push(Check::flag("one-step window holds at lambda=10", check_one_step_condition(&a, &b, &s, 10.0)?));
            for lambda in [1.0, 5.0, 10.0] {
                let (sol, trace) = sindy_solve(&a, &b, &SolverParams::new(lambda))?;
                log.push(format!("lambda = {lambda}"));
                log_trace(&mut log, &trace);
                checks.push(Check::new(
                    format!("lambda={lambda} refinement steps"),
                    1.0,
                    trace.refinement_steps as f64,
                    0.0,
                ));
                compare_vec(&mut checks, &format!("lambda={lambda} x"), &EXAMPLE1_ONESTEP, &sol.x, 1e-4);
            }
        }
        ReproduceCase::Example1Fullpath => {
            let (a, b) = example1_system();
            let (_, trace) = sindy_solve(&a, &b, &SolverParams::new(0.802))?;
            log_trace(&mut log, &trace);
            checks.push(Check::new("refinement steps", 4.0, trace.refinement_steps as f64, 0.0));
            for (k, expected) in EXAMPLE1_PATH.iter().enumerate() {
                match trace.iterates.get(k) {
                    Some(x) => compare_vec(&mut checks, &format!("x^{k}"), expected, x, 1e-3),
                    None => checks.push(Check::flag(format!("x^{k} present"), false)),
                }
            }
            for (k, card) in [4, 3, 2, 1, 1].into_iter().enumerate() {
                let actual = trace.supports.get(k).map_or(f64::NAN, |s| s.len() as f64);
                checks.push(Check::new(format!("|S^{k}|"), card as f64, actual, 0.0));
            }
        }
        ReproduceCase::Table1 => {
            let (a1, b1) = example1_system();
            let (a2, b2) = example2_system();
            let rows: [(&str, &DenseMatrix, &[f64], f64, &[f64]); 3] = [
                ("example 1, lambda=8", &a1, &b1, 8.0, &[320.0, 65.2119]),
                ("example 1, lambda=0.802", &a1, &b1, 0.802, &[3.2160, 2.7727, 2.3688, 2.0490, 1.8551]),
                ("example 2, lambda=0.7", &a2, &b2, 0.7, &[4.9000, 2.9401, 1.4702]),
            ];
            for (label, a, b, lambda, expected) in rows {
                let (_, trace) = sindy_solve(a, b, &SolverParams::new(lambda))?;
                let values: Vec<String> = trace.objective_values.iter().map(|f| format!("{f:.4}")).collect();
                log.push(format!("{label}: F = {}", values.join(", ")));
                checks.push(Check::new(
                    format!("{label} iterate count"),
                    expected.len() as f64,
                    trace.objective_values.len() as f64,
                    0.0,
                ));
                for (k, e) in expected.iter().enumerate() {
                    let actual = trace.objective_values.get(k).copied().unwrap_or(f64::NAN);
                    checks.push(Check::new(format!("{label} F(x^{k})"), *e, actual, 1e-3));
                }
            }
        }
        ReproduceCase::Example2 => {
            let (a, b) = example2_system();
            let (sol, trace) = sindy_solve(&a, &b, &SolverParams::new(0.7))?;
            log_trace(&mut log, &trace);
            checks.push(Check::flag("final support = {1,2,3}", sol.support.to_one_based() == [1, 2, 3]));
            let ordered = trace.supports_by_magnitude();
            let expected: [&[usize]; 3] = [&[2, 3, 8, 4, 1, 5], &[2, 1, 3], &[1, 2, 3]];
            for (k, e) in expected.iter().enumerate() {
                checks.push(Check::flag(
                    format!("S^{k} by magnitude = {e:?}"),
                    ordered.get(k).is_some_and(|s| s.as_slice() == *e),
                ));
            }
            if let Some(x1) = trace.iterates.get(1) {
                compare_vec(&mut checks, "x^1", &EXAMPLE2_X1, x1, 1e-2);
            }
            match trace.iterates.get(2) {
                Some(x2) => compare_vec(&mut checks, "x^2", &EXAMPLE2_X2, x2, 1e-2),
                None => checks.push(Check::flag("x^2 present", false)),
            }
        }
        ReproduceCase::Lorenz | ReproduceCase::Thomas => {
            let (bench, e_reference, e_bound) = match case {
                ReproduceCase::Lorenz => (Benchmark::Lorenz, 0.0278, 0.1),
                _ => (Benchmark::Thomas, 0.0023, 0.05),
            };
            let mut config = IdentifyConfig::preset(bench);
            if let Some(seed) = seed {
                config = config.with_seed(seed);
            }
            let run = identify(&config)?;
            log.push(format!(
                "{:?}: seed {}, noise std {}, {} samples, {} dictionary columns",
                bench,
                config.noise.seed,
                config.noise.std_dev(),
                run.metrics.samples,
                run.metrics.dictionary_columns
            ));
            for fit in &run.fits {
                let terms: Vec<String> = fit
                    .solution
                    .support
                    .indices()
                    .iter()
                    .map(|&j| format!("{:+.4} {}", fit.solution.x[j], run.model.labels[j]))
                    .collect();
                log.push(format!("{} = {}", fit.name, terms.join(" ")));
            }
            checks.push(Check::flag("support equals the true terms", run.metrics.support_recovered == Some(true)));
            let e = run.metrics.relative_error.unwrap_or(f64::NAN);
            // E ≥ 0, so this band is exactly E ≤ e_bound
            checks.push(Check::new("relative error E", e_reference, e, e_bound - e_reference));
            if bench == Benchmark::Lorenz {
                checks.push(Check::new("SNR (dB)", 41.1508, run.metrics.snr.unwrap_or(f64::NAN), 2.0));
            }
        }
    }
    Ok(Reproduction { case, log, checks })
}
