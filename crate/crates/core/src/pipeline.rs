//! End-to-end identification: simulate a benchmark system, perturb the
//! samples, estimate derivatives, build the dictionary and solve one sparse
//! regression per state variable against the shared dictionary.

use serde::{Deserialize, Serialize};

use crate::dictionary::{assemble_dictionary, evaluate_model, DictionarySpec, TermLabel};
use crate::dynamics::{
    finite_difference_derivative, gaussian_noise, relative_error, rk4_integrate, snr, NoiseModel,
    SystemId, TimeSeries, VectorField,
};
use crate::error::{Error, Result};
use crate::numkernel::{DenseMatrix, SupportSet};
use crate::par::{map_range, Execution};
use crate::sindy::{sindy_solve, IterationTrace, SindySystem, SolverParams, SparseSolution, ZERO_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Benchmark {
    Lorenz,
    Thomas,
}

impl Benchmark {
    pub fn system(self) -> SystemId {
        match self {
            Benchmark::Lorenz => SystemId::Lorenz,
            Benchmark::Thomas => SystemId::Thomas,
        }
    }
}

/// Noise level as written in a config file: exactly one of the two fields.
#[derive(Debug, Clone, Copy, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSpec {
    pub std_dev: Option<f64>,
    pub variance: Option<f64>,
}

/// The JSON config accepted by `identify`. Every field but `system` falls
/// back to the system's preset.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentifyRequest {
    pub system: Benchmark,
    pub initial_state: Option<Vec<f64>>,
    pub step: Option<f64>,
    pub horizon: Option<f64>,
    pub dictionary: Option<DictionarySpec>,
    pub lambda: Option<f64>,
    pub gamma: Option<f64>,
    pub max_iter: Option<usize>,
    pub noise: Option<NoiseSpec>,
    pub seed: Option<u64>,
    pub analytic_derivatives: Option<bool>,
    pub resimulate_horizon: Option<f64>,
}

impl IdentifyRequest {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidParameter(format!("config: {e}")))
    }

    pub fn resolve(&self) -> Result<IdentifyConfig> {
        let mut c = IdentifyConfig::preset(self.system);
        if let Some(u0) = &self.initial_state {
            c.initial_state = u0.clone();
        }
        c.step = self.step.unwrap_or(c.step);
        c.horizon = self.horizon.unwrap_or(c.horizon);
        c.dictionary = self.dictionary.unwrap_or(c.dictionary);
        c.params.lambda = self.lambda.unwrap_or(c.params.lambda);
        c.params.gamma = self.gamma.unwrap_or(c.params.gamma);
        c.params.max_iter = self.max_iter.or(c.params.max_iter);
        let seed = self.seed.unwrap_or(c.noise.seed);
        c.noise = match self.noise {
            None => NoiseModel { seed, ..c.noise },
            Some(NoiseSpec {
                std_dev: Some(sd),
                variance: None,
            }) => {
                if !(sd >= 0.0) {
                    return Err(Error::InvalidParameter(format!("noise std_dev must be >= 0, got {sd}")));
                }
                NoiseModel::with_std_dev(sd, seed)
            }
            Some(NoiseSpec {
                std_dev: None,
                variance: Some(v),
            }) => NoiseModel::new(v, seed),
            Some(_) => {
                return Err(Error::InvalidParameter(
                    "noise needs exactly one of std_dev and variance".into(),
                ))
            }
        };
        c.analytic_derivatives = self.analytic_derivatives.unwrap_or(c.analytic_derivatives);
        c.resimulate_horizon = self.resimulate_horizon.or(c.resimulate_horizon);
        c.validate()?;
        Ok(c)
    }
}

/// A fully specified identification run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentifyConfig {
    pub system: Benchmark,
    pub initial_state: Vec<f64>,
    pub step: f64,
    pub horizon: f64,
    pub dictionary: DictionarySpec,
    pub params: SolverParams,
    pub noise: NoiseModel,
    /// Use `f(u)` at the clean samples instead of finite differences of the
    /// perturbed ones.
    pub analytic_derivatives: bool,
    /// Re-integrate the identified model from the initial state up to this time.
    pub resimulate_horizon: Option<f64>,
}

impl IdentifyConfig {
    /// Noise standard deviation 0.1, seed 0, step 0.025.
    pub fn preset(system: Benchmark) -> Self {
        let (initial_state, horizon, dictionary, lambda) = match system {
            Benchmark::Lorenz => (vec![-5.0, 10.0, 30.0], 10.0, DictionarySpec::polynomial(5), 0.8),
            Benchmark::Thomas => (vec![1.0, 1.0, 0.0], 100.0, DictionarySpec::with_trig(3, 1, 1), 0.1),
        };
        Self {
            system,
            initial_state,
            step: 0.025,
            horizon,
            dictionary,
            params: SolverParams::new(lambda),
            noise: NoiseModel::with_std_dev(0.1, 0),
            analytic_derivatives: false,
            resimulate_horizon: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.noise.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.dictionary.validate()?;
        self.params.validate()?;
        self.noise.validate()?;
        if self.initial_state.len() != 3 {
            return Err(Error::DimensionMismatch(format!(
                "{:?} has 3 states, initial_state has {}",
                self.system,
                self.initial_state.len()
            )));
        }
        if let Some(t) = self.resimulate_horizon {
            if !(t > 0.0) {
                return Err(Error::InvalidParameter(format!("resimulate_horizon must be > 0, got {t}")));
            }
        }
        Ok(())
    }
}

/// A sparse model `u̇_i = Σ_j c[i][j]·θ_j(u)` over dictionary terms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentifiedModel {
    pub labels: Vec<TermLabel>,
    pub coefficients: Vec<Vec<f64>>,
}

impl IdentifiedModel {
    pub fn new(labels: Vec<TermLabel>, coefficients: Vec<Vec<f64>>) -> Result<Self> {
        let dim = coefficients.len();
        evaluate_model(&coefficients, &labels, &vec![0.0; dim])?;
        Ok(Self { labels, coefficients })
    }

    pub fn nonzero_terms(&self) -> usize {
        self.coefficients.iter().flatten().filter(|v| v.abs() > ZERO_TOL).count()
    }
}

impl VectorField for IdentifiedModel {
    fn dim(&self) -> usize {
        self.coefficients.len()
    }

    fn rhs(&self, u: &[f64]) -> Vec<f64> {
        evaluate_model(&self.coefficients, &self.labels, u).expect("shape checked on construction")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquationFit {
    pub name: String,
    pub solution: SparseSolution,
    pub trace: IterationTrace,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentifyMetrics {
    /// `None` when the run is noise-free.
    pub snr: Option<f64>,
    pub relative_error: Option<f64>,
    /// Whether every equation picked exactly the true terms.
    pub support_recovered: Option<bool>,
    pub residual_norms: Vec<f64>,
    pub nonzero_terms: usize,
    pub samples: usize,
    pub dictionary_columns: usize,
    /// Time at which re-simulating the identified model diverged.
    pub resimulation_blow_up: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Identification {
    pub config: IdentifyConfig,
    pub model: IdentifiedModel,
    pub fits: Vec<EquationFit>,
    pub metrics: IdentifyMetrics,
    pub clean: TimeSeries,
    pub noisy: TimeSeries,
    pub resimulation: Option<TimeSeries>,
}

pub fn identify(config: &IdentifyConfig) -> Result<Identification> {
    identify_with(config, Execution::default())
}

/// Runs the pipeline; `exec` controls whether the per-equation solves run
/// in parallel.
pub fn identify_with(config: &IdentifyConfig, exec: Execution) -> Result<Identification> {
    config.validate()?;
    let system = config.system.system();
    let clean = rk4_integrate(&system, &config.initial_state, config.step, config.horizon)?;
    let eta = gaussian_noise(clean.len(), clean.dim(), &config.noise)?;
    let states = clean.states();
    let noisy = TimeSeries::new(
        clean.t0(),
        clean.step(),
        DenseMatrix::from_fn(states.rows(), states.cols(), |i, j| states.get(i, j) + eta.get(i, j)),
    )?;

    let derivatives = if config.analytic_derivatives {
        let data = (0..clean.len()).flat_map(|k| system.rhs(states.row(k))).collect();
        DenseMatrix::new(clean.len(), clean.dim(), data)?
    } else {
        finite_difference_derivative(&noisy)?
    };

    let (a, labels) = assemble_dictionary(noisy.states(), &config.dictionary)?;
    let d = clean.dim();
    let params = config.params;
    let solved: Vec<Result<(SparseSolution, IterationTrace)>> = if params.gamma > 0.0 {
        map_range(exec, d, |i| sindy_solve(&a, &derivatives.column(i), &params))
    } else {
        let prepared = SindySystem::new(&a)?;
        map_range(exec, d, |i| prepared.solve(&derivatives.column(i), &params))
    };
    let fits = solved
        .into_iter()
        .enumerate()
        .map(|(i, r)| {
            r.map(|(solution, trace)| EquationFit {
                name: format!("du{}/dt", i + 1),
                solution,
                trace,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let model = IdentifiedModel::new(labels, fits.iter().map(|f| f.solution.x.clone()).collect())?;

    let snr_db = if config.noise.variance > 0.0 {
        Some(snr(states.as_slice(), eta.as_slice())?)
    } else {
        None
    };
    let truth = system.true_coefficients(&model.labels);
    let rel = match &truth {
        Some(t) => Some(relative_error(&model.coefficients.concat(), &t.concat())?),
        None => None,
    };
    let support_recovered = truth.as_ref().map(|t| {
        t.iter()
            .zip(&fits)
            .all(|(tc, fit)| SupportSet::of_nonzero(tc, 0.0) == SupportSet::of_nonzero(&fit.solution.x, ZERO_TOL))
    });

    let (resimulation, blow_up) = match config.resimulate_horizon {
        None => (None, None),
        Some(t_end) => match rk4_integrate(&model, &config.initial_state, config.step, t_end) {
            Ok(ts) => (Some(ts), None),
            Err(Error::BlowUp { time }) => (None, Some(time)),
            Err(e) => return Err(e),
        },
    };

    let metrics = IdentifyMetrics {
        snr: snr_db,
        relative_error: rel,
        support_recovered,
        residual_norms: fits.iter().map(|f| f.solution.residual_norm).collect(),
        nonzero_terms: model.nonzero_terms(),
        samples: a.rows(),
        dictionary_columns: a.cols(),
        resimulation_blow_up: blow_up,
    };
    Ok(Identification {
        config: config.clone(),
        model,
        fits,
        metrics,
        clean,
        noisy,
        resimulation,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeedOutcome {
    pub seed: u64,
    pub support_recovered: bool,
    pub relative_error: Option<f64>,
    pub snr: Option<f64>,
}

/// Repeats the run for each seed. Seeds run in parallel under
/// [`Execution::Parallel`]; each run's equations are solved sequentially.
pub fn sweep_seeds(config: &IdentifyConfig, seeds: &[u64], exec: Execution) -> Vec<Result<SeedOutcome>> {
    let base = IdentifyConfig {
        resimulate_horizon: None,
        ..config.clone()
    };
    map_range(exec, seeds.len(), |k| {
        let run = identify_with(&base.clone().with_seed(seeds[k]), Execution::Sequential)?;
        Ok(SeedOutcome {
            seed: seeds[k],
            support_recovered: run.metrics.support_recovered.unwrap_or(false),
            relative_error: run.metrics.relative_error,
            snr: run.metrics.snr,
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn request_defaults_to_preset() {
        let req = IdentifyRequest::from_json(r#"{"system": "lorenz"}"#).unwrap();
        assert_eq!(req.resolve().unwrap(), IdentifyConfig::preset(Benchmark::Lorenz));
        let thomas = IdentifyRequest::from_json(r#"{"system": "thomas"}"#).unwrap().resolve().unwrap();
        assert_eq!(thomas.horizon, 100.0);
        assert_eq!(thomas.initial_state, vec![1.0, 1.0, 0.0]);
        assert_eq!(thomas.params.lambda, 0.1);
    }

    #[test]
    fn request_overrides() {
        let req = IdentifyRequest::from_json(
            r#"{"system": "lorenz", "lambda": 0.5, "seed": 9, "noise": {"variance": 0.04},
                "dictionary": {"poly_order": 3}}"#,
        )
        .unwrap();
        let c = req.resolve().unwrap();
        assert_eq!(c.params.lambda, 0.5);
        assert_eq!(c.noise, NoiseModel::new(0.04, 9));
        assert_eq!(c.dictionary, DictionarySpec::polynomial(3));
    }

    #[test]
    fn request_rejects_bad_input() {
        assert!(IdentifyRequest::from_json(r#"{"system": "rossler"}"#).is_err());
        assert!(IdentifyRequest::from_json(r#"{"system": "lorenz", "lamda": 1}"#).is_err());
        let both = IdentifyRequest::from_json(r#"{"system": "lorenz", "noise": {"std_dev": 0.1, "variance": 0.01}}"#)
            .unwrap();
        assert!(both.resolve().is_err());
        let short = IdentifyRequest::from_json(r#"{"system": "lorenz", "initial_state": [1, 2]}"#).unwrap();
        assert!(short.resolve().is_err());
    }

    #[test]
    fn noise_free_lorenz_is_exact() {
        let mut c = IdentifyConfig::preset(Benchmark::Lorenz);
        c.noise = NoiseModel::new(0.0, 0);
        c.analytic_derivatives = true;
        c.dictionary = DictionarySpec::polynomial(2);
        c.horizon = 2.0;
        let run = identify(&c).unwrap();
        assert_eq!(run.metrics.support_recovered, Some(true));
        assert!(run.metrics.relative_error.unwrap() < 1e-9);
        assert_eq!(run.metrics.snr, None);
    }

    #[test]
    fn too_short_horizon_is_actionable() {
        let mut c = IdentifyConfig::preset(Benchmark::Lorenz);
        c.horizon = 0.5;
        match identify(&c) {
            Err(Error::TooFewSamples { samples, columns }) => assert_eq!((samples, columns), (21, 56)),
            other => panic!("unexpected {other:?}"),
        }
    }
}
