use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::json;

use sindy_core::dynamics::TimeSeries;
use sindy_core::pipeline::{identify, IdentifyConfig, IdentifyRequest, Identification};
use sindy_core::reproduce::{reproduce, ReproduceCase, Reproduction};
use sindy_core::sindy::{sindy_solve, IterationTrace, SolveStatus, SolverParams};

use crate::csvio::{read_matrix, read_vector, write_table};
use crate::error::{CliError, EXIT_EMPTY_SUPPORT, EXIT_MISMATCH, EXIT_OK};

pub const SEED_ENV: &str = "SINDY_SEED";

/// The `SINDY_SEED` override, if set.
pub fn seed_from_env() -> Result<Option<u64>, CliError> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Config(format!("{SEED_ENV}='{s}' is not an unsigned 64-bit integer"))),
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(CliError::Config(format!("{SEED_ENV}: {e}"))),
    }
}

#[derive(Serialize)]
struct TraceReport<'a> {
    params: &'a SolverParams,
    status: SolveStatus,
    refinement_steps: usize,
    raw_iterations: usize,
    scale: f64,
    iterates: &'a [Vec<f64>],
    /// 1-based, ascending.
    supports: Vec<Vec<usize>>,
    /// 1-based, by decreasing magnitude.
    supports_by_magnitude: Vec<Vec<usize>>,
    objective_values: &'a [f64],
    residual_norms: &'a [f64],
}

impl<'a> TraceReport<'a> {
    fn new(params: &'a SolverParams, trace: &'a IterationTrace) -> Self {
        Self {
            params,
            status: trace.status,
            refinement_steps: trace.refinement_steps,
            raw_iterations: trace.raw_iterations(),
            scale: trace.scale,
            iterates: &trace.iterates,
            supports: trace.supports.iter().map(|s| s.to_one_based()).collect(),
            supports_by_magnitude: trace.supports_by_magnitude(),
            objective_values: &trace.objective_values,
            residual_norms: &trace.residual_norms,
        }
    }
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Config(e.to_string()))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn write_series(path: &Path, series: &TimeSeries) -> Result<(), CliError> {
    let file = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    series
        .write_csv(std::io::BufWriter::new(file))
        .map_err(|e| CliError::io(path, e))
}

/// Writes `solution.csv` (`index,x`, 1-based) and `trace.json`.
pub fn cmd_solve(a_path: &Path, b_path: &Path, lambda: f64, gamma: Option<f64>, out: &Path) -> Result<i32, CliError> {
    let a = read_matrix(a_path)?;
    let b = read_vector(b_path)?;
    let mut params = SolverParams::new(lambda);
    if let Some(g) = gamma {
        params = params.with_gamma(g);
    }
    let (solution, trace) = sindy_solve(&a, &b, &params)?;

    ensure_dir(out)?;
    write_table(
        &out.join("solution.csv"),
        &["index".into(), "x".into()],
        solution.x.iter().enumerate().map(|(j, v)| ((j + 1).to_string(), vec![*v])),
    )?;
    write_json(&out.join("trace.json"), &TraceReport::new(&params, &trace))?;

    println!(
        "status: {:?}, refinement steps: {}, support: {:?}, F = {:.6}",
        solution.status,
        trace.refinement_steps,
        solution.support.to_one_based(),
        solution.objective
    );
    if solution.status == SolveStatus::EmptyInitialSupport {
        eprintln!("no entry of the least-squares solution reaches lambda = {lambda}; returned x = 0");
        return Ok(EXIT_EMPTY_SUPPORT);
    }
    Ok(EXIT_OK)
}

pub fn load_config(path: &Path) -> Result<IdentifyConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut request: IdentifyRequest = serde_json::from_str(&text).map_err(|e| CliError::Input {
        file: path.to_path_buf(),
        message: e.to_string(),
    })?;
    if let Some(seed) = seed_from_env()? {
        request.seed = Some(seed);
    }
    request.resolve().map_err(|e| CliError::Input {
        file: path.to_path_buf(),
        message: e.to_string(),
    })
}

/// The deterministic part of `report.json`; the caller appends the wall time.
pub fn identify_report(run: &Identification) -> serde_json::Value {
    let equations: Vec<_> = run
        .fits
        .iter()
        .map(|fit| {
            let terms: Vec<_> = fit
                .solution
                .support
                .indices()
                .iter()
                .map(|&j| json!({ "term": run.model.labels[j].to_string(), "coefficient": fit.solution.x[j] }))
                .collect();
            json!({
                "name": fit.name,
                "status": fit.solution.status,
                "terms": terms,
                "refinement_steps": fit.trace.refinement_steps,
                "residual_norm": fit.solution.residual_norm,
                "objective": fit.solution.objective,
            })
        })
        .collect();
    json!({
        "config": run.config,
        "metrics": run.metrics,
        "equations": equations,
    })
}

/// Writes `coefficients.csv`, `report.json`, `traces.json`,
/// `trajectory.csv`, `noisy.csv` and, when requested, `resimulation.csv`.
pub fn cmd_identify(config_path: &Path, out: &Path) -> Result<i32, CliError> {
    let config = load_config(config_path)?;
    let started = Instant::now();
    let run = identify(&config)?;
    let wall_time = started.elapsed().as_secs_f64();

    ensure_dir(out)?;
    let mut header = vec!["term".to_string()];
    header.extend(run.fits.iter().map(|f| f.name.clone()));
    write_table(
        &out.join("coefficients.csv"),
        &header,
        run.model
            .labels
            .iter()
            .enumerate()
            .map(|(j, label)| (label.to_string(), run.model.coefficients.iter().map(|c| c[j]).collect())),
    )?;

    let mut report = identify_report(&run);
    report["wall_time_secs"] = json!(wall_time);
    write_json(&out.join("report.json"), &report)?;

    let traces: Vec<_> = run
        .fits
        .iter()
        .map(|f| json!({ "name": f.name, "trace": TraceReport::new(&config.params, &f.trace) }))
        .collect();
    write_json(&out.join("traces.json"), &traces)?;
    write_series(&out.join("trajectory.csv"), &run.clean)?;
    write_series(&out.join("noisy.csv"), &run.noisy)?;
    if let Some(resim) = &run.resimulation {
        write_series(&out.join("resimulation.csv"), resim)?;
    }

    for fit in &run.fits {
        let terms: Vec<String> = fit
            .solution
            .support
            .indices()
            .iter()
            .map(|&j| format!("{:+.4} {}", fit.solution.x[j], run.model.labels[j]))
            .collect();
        println!("{} = {}", fit.name, terms.join(" "));
    }
    let m = &run.metrics;
    if let Some(e) = m.relative_error {
        println!("relative error E = {e:.4}");
    }
    if let Some(s) = m.snr {
        println!("SNR = {s:.4} dB");
    }
    if let Some(t) = m.resimulation_blow_up {
        eprintln!("re-simulation of the identified model diverged at t = {t}");
    }
    Ok(EXIT_OK)
}

pub fn render_reproduction(r: &Reproduction) -> String {
    let mut lines = vec![format!("case: {}", r.case)];
    lines.extend(r.log.iter().cloned());
    let width = r.checks.iter().map(|c| c.name.len()).max().unwrap_or(5).max(5);
    lines.push(format!("{:<width$}  {:>14}  {:>14}  {:>9}  result", "check", "expected", "actual", "tol"));
    for c in &r.checks {
        lines.push(format!(
            "{:<width$}  {:>14.6}  {:>14.6}  {:>9.1e}  {}",
            c.name,
            c.expected,
            c.actual,
            c.tol,
            if c.pass { "PASS" } else { "FAIL" }
        ));
    }
    let failed = r.checks.iter().filter(|c| !c.pass).count();
    lines.push(if failed == 0 {
        format!("PASS ({} checks)", r.checks.len())
    } else {
        format!("FAIL ({failed} of {} checks outside tolerance)", r.checks.len())
    });
    lines.join("\n")
}

pub fn cmd_reproduce(case: &str) -> Result<i32, CliError> {
    let case: ReproduceCase = case.parse()?;
    let r = reproduce(case, seed_from_env()?)?;
    println!("{}", render_reproduction(&r));
    Ok(if r.passed() { EXIT_OK } else { EXIT_MISMATCH })
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Solve {
        a: PathBuf,
        b: PathBuf,
        lambda: f64,
        gamma: Option<f64>,
        out: PathBuf,
    },
    Identify {
        config: PathBuf,
        out: PathBuf,
    },
    Reproduce {
        case: String,
    },
}

pub fn run(command: &Command) -> Result<i32, CliError> {
    match command {
        Command::Solve { a, b, lambda, gamma, out } => cmd_solve(a, b, *lambda, *gamma, out),
        Command::Identify { config, out } => cmd_identify(config, out),
        Command::Reproduce { case } => cmd_reproduce(case),
    }
}
