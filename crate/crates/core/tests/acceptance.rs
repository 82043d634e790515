mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{example1, instance, raw_objective};
use sindy_core::dynamics::{rk4_integrate, NoiseModel};
use sindy_core::numkernel::{norm2, DenseMatrix};
use sindy_core::pipeline::{identify, sweep_seeds, Benchmark, IdentifyConfig};
use sindy_core::reproduce::{reproduce, ReproduceCase};
use sindy_core::sindy::*;
use sindy_core::Execution;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn reproduction(case: ReproduceCase) -> Outcome {
    match reproduce(case, None) {
        Ok(r) => {
            let failed: Vec<&str> = r.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
            if failed.is_empty() {
                outcome(true, format!("{} checks within tolerance", r.checks.len()))
            } else {
                outcome(false, format!("{} of {} checks off: {}", failed.len(), r.checks.len(), failed.join("; ")))
            }
        }
        Err(e) => outcome(false, e.to_string()),
    }
}

fn example1_one_step() -> Outcome {
    let (a, b) = example1();
    let mut notes = Vec::new();
    let mut pass = true;
    for lambda in [1.0, 5.0, 10.0] {
        let start = Instant::now();
        let result = sindy_solve(&a, &b, &SolverParams::new(lambda));
        let elapsed = start.elapsed();
        let (sol, trace) = match result {
            Ok(r) => r,
            Err(e) => return outcome(false, format!("lambda={lambda}: {e}")),
        };
        let target = [9.7981, 0.0, 0.0, 0.0, 0.0];
        let err = sol.x.iter().zip(target).map(|(x, t)| (x - t).abs()).fold(0.0, f64::max);
        let ok = trace.refinement_steps == 1 && err <= 1e-4 && elapsed < Duration::from_millis(1);
        pass &= ok;
        notes.push(format!(
            "lambda={lambda}: {} step(s), max err {err:.1e}, {:?}{}",
            trace.refinement_steps,
            elapsed,
            if ok { "" } else { " FAIL" }
        ));
    }
    outcome(pass, notes.join("; "))
}

fn benchmark(bench: Benchmark, e_bound: f64, snr_band: Option<(f64, f64)>, budget: Option<Duration>) -> Outcome {
    let config = IdentifyConfig::preset(bench);
    let seeds: Vec<u64> = (0..100).collect();
    let start = Instant::now();
    let outcomes = sweep_seeds(&config, &seeds, Execution::default());
    let elapsed = start.elapsed();
    let mut good = 0;
    let mut support = 0;
    let mut e_ok = 0;
    for o in outcomes.iter().flatten() {
        let within_e = o.relative_error.is_some_and(|e| e <= e_bound);
        let within_snr = match snr_band {
            Some((centre, half)) => o.snr.is_some_and(|s| (s - centre).abs() <= half),
            None => true,
        };
        support += usize::from(o.support_recovered);
        e_ok += usize::from(within_e);
        good += usize::from(o.support_recovered && within_e && within_snr);
    }
    let errors = outcomes.iter().filter(|o| o.is_err()).count();
    let in_time = budget.is_none_or(|b| elapsed < b);
    outcome(
        good >= 95 && in_time && errors == 0,
        format!(
            "{good}/100 seeds meet every band (support {support}, E <= {e_bound} {e_ok}, errors {errors}), {elapsed:.2?}"
        ),
    )
}

fn property_suite() -> Outcome {
    let mut violations = Vec::new();
    let mut empty = 0;
    for seed in 0..1000u64 {
        let inst = instance(seed, (8, 30), (4, 12));
        let (a, b, lambda) = (&inst.a, &inst.b, inst.lambda);
        let (sol, trace) = match sindy_solve(a, b, &SolverParams::new(lambda)) {
            Ok(r) => r,
            Err(e) => {
                violations.push(format!("seed {seed}: {e}"));
                continue;
            }
        };
        if !trace.converged() {
            empty += 1;
            continue;
        }
        let bnorm = norm2(b);
        let nested = trace.supports.windows(2).all(|w| w[1].is_subset_of(&w[0]));
        let bounded = trace.iterations_used() <= a.cols();
        let decreasing = (0..trace.iterates.len() - 1).all(|k| {
            let (f, g) = (trace.objective_values[k], trace.objective_values[k + 1]);
            if trace.iterates[k] == trace.iterates[k + 1] { g <= f } else { g < f }
        });
        let residuals = trace.residual_norms.windows(2).all(|w| w[1] >= w[0] - 1e-10 * bnorm)
            && trace.residual_norms[1..].iter().all(|r| *r <= bnorm * (1.0 + 1e-12));
        let fixed = is_fixed_point(a, b, &sol.x, lambda, FIXED_POINT_TOL);
        for (name, ok) in [
            ("nesting", nested),
            ("iteration bound", bounded),
            ("F decrease", decreasing),
            ("residuals", residuals),
            ("fixed point", fixed),
        ] {
            if !ok {
                violations.push(format!("seed {seed}: {name}"));
            }
        }
    }
    outcome(
        violations.is_empty(),
        format!("{} violations over 1000 instances ({empty} with empty S^0){}", violations.len(), preview(&violations)),
    )
}

fn oracle_suite() -> Outcome {
    let start = Instant::now();
    let mut violations = Vec::new();
    for seed in 0..200u64 {
        let inst = instance(10_000 + seed, (8, 30), (4, 10));
        let (a, b, _) = normalize_system(&inst.a, &inst.b);
        let lambda = inst.lambda;
        let oracle = match brute_force_global_min(&a, &b, lambda) {
            Ok(o) => o,
            Err(e) => {
                violations.push(format!("seed {seed}: {e}"));
                continue;
            }
        };
        let f_oracle = raw_objective(&a, &b, &oracle.x, lambda);
        match sindy_solve(&a, &b, &SolverParams::new(lambda)) {
            Ok((sol, _)) if raw_objective(&a, &b, &sol.x, lambda) < f_oracle - 1e-10 => {
                violations.push(format!("seed {seed}: scheme beat the oracle"));
            }
            Ok(_) => {}
            Err(e) => violations.push(format!("seed {seed}: {e}")),
        }
        if !check_global_min_conditions(&a, &b, &oracle.x, lambda, 1e-8) {
            violations.push(format!("seed {seed}: global-min conditions"));
        }
        if !is_fixed_point(&a, &b, &oracle.x, lambda, FIXED_POINT_TOL) {
            violations.push(format!("seed {seed}: oracle moved under one iteration"));
        }
    }
    let elapsed = start.elapsed();
    outcome(
        violations.is_empty() && elapsed < Duration::from_secs(60),
        format!("{} violations over 200 instances, {elapsed:.2?}{}", violations.len(), preview(&violations)),
    )
}

fn stridge_equivalence() -> Outcome {
    let mut mismatches = 0;
    for seed in 0..100u64 {
        let inst = instance(20_000 + seed, (8, 30), (4, 12));
        let gamma = 0.05 + 0.01 * (seed % 20) as f64;
        let params = SolverParams::new(inst.lambda).with_gamma(gamma);
        let (aug, rhs) = match augment_ridge(&inst.a, &inst.b, gamma) {
            Ok(r) => r,
            Err(_) => {
                mismatches += 1;
                continue;
            }
        };
        let ridge = stridge_solve(&inst.a, &inst.b, &params);
        let plain = sindy_solve(&aug, &rhs, &SolverParams::new(inst.lambda));
        if ridge.is_err() || ridge != plain {
            mismatches += 1;
        }
    }
    let a = DenseMatrix::from_fn(12, 4, |i, j| {
        let i = i as f64;
        match j {
            0 | 1 => i.sin(),
            2 => i.cos(),
            _ => (0.3 * i).exp() / 20.0,
        }
    });
    let b: Vec<f64> = (0..12).map(|i| 1.5 * (i as f64).sin() - 0.7 * (i as f64).cos()).collect();
    let dup = stridge_solve(&a, &b, &SolverParams::new(0.3).with_gamma(0.1));
    let dup_ok = dup.as_ref().is_ok_and(|(s, t)| t.converged() && t.refinement_steps <= 4 && s.x.iter().all(|v| v.is_finite()));
    outcome(
        mismatches == 0 && dup_ok,
        format!(
            "{mismatches}/100 trace mismatches; duplicated column: {}",
            match &dup {
                Ok((s, t)) => format!("{:?} after {} step(s), support {:?}", s.status, t.refinement_steps, s.support.to_one_based()),
                Err(e) => e.to_string(),
            }
        ),
    )
}

fn rk4_and_closed_loop() -> Outcome {
    let f = (1usize, |u: &[f64]| vec![u[0]]);
    let err = |h: f64| {
        rk4_integrate(&f, &[1.0], h, 1.0).map(|r| (r.last_state()[0] - 1f64.exp()).abs())
    };
    let factor = match (err(0.1), err(0.05)) {
        (Ok(e1), Ok(e2)) => e1 / e2,
        _ => f64::NAN,
    };
    let config = IdentifyConfig {
        params: SolverParams::new(0.5),
        noise: NoiseModel::new(0.0, 0),
        analytic_derivatives: true,
        ..IdentifyConfig::preset(Benchmark::Lorenz)
    };
    let max_dev = identify(&config).ok().and_then(|run| {
        let truth = sindy_core::dynamics::SystemId::Lorenz.true_coefficients(&run.model.labels)?;
        Some(
            run.model
                .coefficients
                .iter()
                .flatten()
                .zip(truth.iter().flatten())
                .map(|(c, t)| (c - t).abs())
                .fold(0.0, f64::max),
        )
    });
    let dev = max_dev.unwrap_or(f64::NAN);
    outcome(
        (12.0..=20.0).contains(&factor) && dev <= 1e-6,
        format!("halving factor {factor:.3}; closed-loop max coefficient error {dev:.1e}"),
    )
}

fn preview(v: &[String]) -> String {
    if v.is_empty() {
        String::new()
    } else {
        format!(": {}", v.iter().take(5).cloned().collect::<Vec<_>>().join("; "))
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("example 1 one-step regime", example1_one_step),
        ("example 1 full path", || reproduction(ReproduceCase::Example1Fullpath)),
        ("objective table", || reproduction(ReproduceCase::Table1)),
        ("example 2", || reproduction(ReproduceCase::Example2)),
        ("lorenz identification", || benchmark(Benchmark::Lorenz, 0.1, Some((41.0, 2.0)), Some(Duration::from_secs(5)))),
        ("thomas identification", || benchmark(Benchmark::Thomas, 0.05, None, None)),
        ("property suite", property_suite),
        ("oracle suite", oracle_suite),
        ("ridge equivalence", stridge_equivalence),
        ("rk4 order and closed loop", rk4_and_closed_loop),
    ];
    let mut failures = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        failures += usize::from(!o.pass);
        println!("{} [{:>2}] {name}: {}", if o.pass { "PASS" } else { "FAIL" }, k + 1, o.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
