use monokit::fem1d::{manufactured_rhs, random_discrete_function, solve_elliptic, DEFAULT_TABULATION};
use monokit::inequality::{lemma_integral_exact, lemma_lower_bound};
use monokit::parabolic::stabilization_run;
use monokit::verifier::{certify, REPORT_CSV_HEADER};
use monokit::{DiscreteFunction, MonotonicityReport, ParabolicConfig, SolveConfig};
use serde::Serialize;

use crate::config::{Command, InitialData, RunConfig};
use crate::{write_file, CliError, EXIT_FAIL, EXIT_PASS};

/// Relative slack of the lemma pass criterion.
const LEMMA_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => EXIT_PASS,
            Outcome::Fail => EXIT_FAIL,
        }
    }
}

fn to_json<S: Serialize>(value: &S) -> String {
    serde_json::to_string_pretty(value).expect("report serializes") + "\n"
}

/// Runs a validated configuration and writes its outputs.
pub fn dispatch(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let out = &cfg.output_path;
    write_file(out, "effective_config.json", &cfg.to_json())?;
    match cfg.command {
        Command::Lemma => run_lemma(cfg),
        Command::Check => {
            let spec = cfg.family_spec()?;
            let report = certify(&spec, &cfg.sample, &cfg.pair_sample())?;
            write_file(out, "report.json", &to_json(&report))?;
            let csv = report.to_csv();
            write_file(out, "report.csv", &csv)?;
            print!("{csv}");
            Ok(Outcome::from_bool(report.passed()))
        }
        Command::Solve => run_solve(cfg),
        Command::Parabolic => run_parabolic(cfg),
        Command::Sweep => {
            let mut reports: Vec<MonotonicityReport<f64>> = Vec::new();
            let mut csv = format!("{REPORT_CSV_HEADER}\n");
            for &p in &cfg.sweep.p_values {
                let spec = cfg.family_at(p)?;
                let report = certify(&spec, &cfg.sample, &cfg.pair_sample())?;
                csv.push_str(&report.csv_row());
                csv.push('\n');
                reports.push(report);
            }
            write_file(out, "report.json", &to_json(&reports))?;
            write_file(out, "report.csv", &csv)?;
            print!("{csv}");
            Ok(Outcome::from_bool(reports.iter().all(|r| r.passed())))
        }
    }
}

#[derive(Serialize)]
struct LemmaReport {
    a: f64,
    b: f64,
    s: f64,
    exact: f64,
    bound: f64,
    slack: f64,
    holds: bool,
}

fn run_lemma(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let input = cfg.lemma_input()?;
    let exact = lemma_integral_exact(&input);
    let bound = lemma_lower_bound(&input);
    let slack = exact - bound;
    let report = LemmaReport {
        a: input.a,
        b: input.b,
        s: input.s,
        exact,
        bound,
        slack,
        holds: slack >= -LEMMA_TOLERANCE * bound.abs().max(1.0),
    };
    let csv = format!(
        "a,b,s,exact,bound,slack\n{},{},{},{},{},{}\n",
        report.a, report.b, report.s, exact, bound, slack
    );
    write_file(&cfg.output_path, "report.json", &to_json(&report))?;
    write_file(&cfg.output_path, "report.csv", &csv)?;
    print!("{csv}");
    Ok(Outcome::from_bool(report.holds))
}

#[derive(Serialize)]
struct SolveReport {
    family: monokit::RawFamilySpec<f64>,
    elements: usize,
    iterations: usize,
    residual_history: Vec<f64>,
    converged: bool,
    final_residual: f64,
    /// Nodal max-norm error against the manufactured solution.
    #[serde(skip_serializing_if = "Option::is_none")]
    max_nodal_error: Option<f64>,
}

fn run_solve(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let spec = cfg.family_spec()?;
    let load = match &cfg.manufactured {
        Some(u) => manufactured_rhs(&spec, u, DEFAULT_TABULATION)?,
        None => cfg.load.clone(),
    };
    let res = solve_elliptic(&spec, cfg.mesh, &load, &cfg.solver)?;
    let max_nodal_error = match &cfg.manufactured {
        Some(u) => {
            let exact = DiscreteFunction::interpolate(cfg.mesh, |x| u.value(x));
            Some(res.solution.max_abs_diff(&exact)?)
        }
        None => None,
    };
    let report = SolveReport {
        family: spec.into(),
        elements: cfg.mesh.elements(),
        iterations: res.iterations,
        residual_history: res.residual_history.clone(),
        converged: res.converged,
        final_residual: res.final_residual,
        max_nodal_error,
    };
    write_file(&cfg.output_path, "solution.csv", &res.solution.to_csv())?;
    write_file(&cfg.output_path, "report.json", &to_json(&report))?;
    println!(
        "converged={} iterations={} residual={:e}",
        res.converged, res.iterations, res.final_residual
    );
    Ok(Outcome::from_bool(res.converged))
}

#[derive(Serialize)]
struct ParabolicReport {
    family: monokit::RawFamilySpec<f64>,
    elements: usize,
    horizon: f64,
    steps: usize,
    tau: f64,
    distances: Vec<f64>,
    monotone: bool,
}

fn run_parabolic(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let spec = cfg.family_spec()?;
    let mesh = cfg.mesh;
    let initial_data = match &cfg.parabolic.initial {
        InitialData::Random { amplitude } => random_discrete_function(mesh, *amplitude, cfg.seed, 0),
        InitialData::Zero => DiscreteFunction::zero(mesh),
        InitialData::Nodal { values } => DiscreteFunction::new(mesh, values.clone())?,
    };
    let load = match &cfg.manufactured {
        Some(u) => manufactured_rhs(&spec, u, DEFAULT_TABULATION)?,
        None => cfg.load.clone(),
    };
    let par = ParabolicConfig {
        horizon: cfg.parabolic.horizon,
        steps: cfg.parabolic.steps,
        initial_data,
        load,
        solver: SolveConfig {
            initial_guess: None,
            ..cfg.solver.clone()
        },
    };
    let run = stabilization_run(&spec, &par)?;
    let report = ParabolicReport {
        family: spec.into(),
        elements: mesh.elements(),
        horizon: par.horizon,
        steps: par.steps,
        tau: run.tau,
        distances: run.distances.clone(),
        monotone: run.monotone,
    };
    write_file(&cfg.output_path, "decay.csv", &run.to_csv())?;
    write_file(&cfg.output_path, "solution.csv", &run.final_state.to_csv())?;
    write_file(&cfg.output_path, "report.json", &to_json(&report))?;
    println!("monotone={} d0={:e} dM={:e}", run.monotone, run.first(), run.last());
    Ok(Outcome::from_bool(run.monotone))
}
