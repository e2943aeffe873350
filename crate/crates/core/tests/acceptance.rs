//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use monokit::families::fd_jacobian;
use monokit::fem1d::{
    assemble_tangent, continuous_dependence_check, discrete_monotonicity_check, mass_matrix,
    random_discrete_function, random_polynomial_load, solve_elliptic, wp_norm,
};
use monokit::inequality::{lemma_integral_exact, lemma_integral_quadrature, lemma_lower_bound};
use monokit::parabolic::stabilization_run;
use monokit::verifier::{certify, delta_scan, monotone_gap_ratio, theoretical_c};
use monokit::{
    DiscreteFunctionF64, FamilySpecF64, LemmaInput, LoadSpecF64, Mesh1D, MonotonicityReportF64, ParabolicConfigF64,
    SampleConfig, SolveConfigF64,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_601;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn run(number: usize, name: &str, limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let Outcome { mut pass, detail } = f();
    let elapsed = start.elapsed();
    let mut timing = format!("{:.2} s", elapsed.as_secs_f64());
    if let Some(limit) = limit {
        timing.push_str(&format!(" / limit {} s", limit.as_secs()));
        pass &= elapsed <= limit;
    }
    println!(
        "criterion {number:>2} [{name}]: {} ({detail}; {timing})",
        if pass { "PASS" } else { "FAIL" }
    );
    pass
}

// 1
fn lemma_sharpness() -> Outcome {
    let mut worst = 0.0_f64;
    let mut pass = true;
    for b in [1.0, -3.0, 0.25] {
        for s in [0.0, 1.0, 2.0, 3.5] {
            let input = LemmaInput::<f64>::new(-b / 2.0, b, s).unwrap();
            let exact = lemma_integral_exact(&input);
            let bound = lemma_lower_bound(&input);
            let gap = (exact - bound).abs();
            worst = worst.max(gap / bound.max(1.0));
            pass &= gap <= 1e-12 * bound.max(1.0);
        }
    }
    outcome(pass, format!("max relative gap {worst:.1e}"))
}

// 2
fn lemma_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut below, mut worst_rel) = (0usize, 0.0_f64);
    for _ in 0..10_000 {
        let a = rng.gen_range(-10.0..10.0);
        let b = rng.gen_range(-10.0..10.0);
        let s = rng.gen_range(0.0..6.0);
        let input = LemmaInput::<f64>::new(a, b, s).unwrap();
        let exact = lemma_integral_exact(&input);
        if exact < lemma_lower_bound(&input) - 1e-12 {
            below += 1;
        }
        let quad = lemma_integral_quadrature(&input, 4096).unwrap();
        worst_rel = worst_rel.max((exact - quad).abs() / exact.abs().max(f64::MIN_POSITIVE));
    }
    outcome(
        below == 0 && worst_rel <= 1e-6,
        format!("{below} below bound, max quadrature rel. diff {worst_rel:.1e}"),
    )
}

fn random_admissible(rng: &mut ChaCha8Rng, dim: usize, radius: f64) -> Vec<f64> {
    (0..dim)
        .map(|_| {
            let m = rng.gen_range(1e-3..radius);
            if rng.gen::<bool>() {
                m
            } else {
                -m
            }
        })
        .collect()
}

// 3
fn jacobian_correctness() -> Outcome {
    let cells: Vec<(FamilySpecF64, f64)> = vec![
        (FamilySpecF64::example1(3.0, 2).unwrap(), 10.0),
        (FamilySpecF64::example2(3.0, 2).unwrap(), 10.0),
        (FamilySpecF64::example3_default(3.0, 2, 1.0).unwrap(), 10.0),
        (FamilySpecF64::example3(4.0, 2, 1.0, vec![1.0, 1.0, 1.0]).unwrap(), 10.0),
        (FamilySpecF64::example4(3.0, 2, 1).unwrap(), 10.0),
        (FamilySpecF64::example4_high_p(5.0, 2, 1, 3.0).unwrap(), 10.0),
        (FamilySpecF64::example5_calibrated(3.0, 2, 1.0).unwrap(), 1.0),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 3);
    let mut worst = 0.0_f64;
    for (spec, radius) in &cells {
        for _ in 0..100 {
            let xi = random_admissible(&mut rng, spec.dim(), *radius);
            let exact = spec.eval_jacobian(&xi).unwrap();
            let fd = fd_jacobian(spec, &xi, 1e-5 * xi.iter().fold(1.0_f64, |m, x| m.max(x.abs()))).unwrap();
            let diff = exact
                .as_slice()
                .iter()
                .zip(fd.as_slice())
                .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
            worst = worst.max(diff / exact.max_abs());
        }
    }
    outcome(worst <= 1e-5, format!("{} families, max rel. error {worst:.1e}", cells.len()))
}

/// Parameter cells of criteria 4 and 5: (spec, lower bound on delta_inf, exact value if known, sample box).
fn delta_cells() -> Vec<(FamilySpecF64, f64, Option<f64>, f64)> {
    let mut cells = Vec::new();
    for p in [2.0, 3.0, 4.0] {
        cells.push((FamilySpecF64::example1(p, 2).unwrap(), p - 1.0, Some(p - 1.0), 10.0));
    }
    for p in [2.0, 3.0, 4.0] {
        for n in 1..=3 {
            cells.push((FamilySpecF64::example2(p, n).unwrap(), 1.0, None, 10.0));
        }
    }
    for p in [2.0, 3.0, 4.0] {
        for n in 1..=2 {
            let bound = 1.0 / (n as f64 + 2.0);
            cells.push((FamilySpecF64::example3_default(p, n, 1.0).unwrap(), bound, None, 10.0));
        }
    }
    for p in [2.0, 3.0, 4.0] {
        for k in 0..=1 {
            cells.push((FamilySpecF64::example4(p, 2, k).unwrap(), 1.0, None, 10.0));
        }
    }
    for p in [2.0, 3.0] {
        for n in 1..=2 {
            let spec = FamilySpecF64::example5_calibrated(p, n, 1.0).unwrap();
            let bound = p - 1.0 - (2 * n + 1) as f64 * spec.alpha();
            // most of a large box lies outside the bump support
            cells.push((spec, bound, None, 1.5));
        }
    }
    cells
}

fn label(spec: &FamilySpecF64) -> String {
    format!("{}(p={}, n={})", spec.variant(), spec.p(), spec.n())
}

// 4
fn delta_reproduction() -> Outcome {
    let mut failures = Vec::new();
    let cells = delta_cells();
    for (spec, bound, exact, radius) in &cells {
        let cfg = SampleConfig::new(*radius, 1e-3, 10_000, SEED);
        let delta = delta_scan(spec, &cfg).unwrap();
        let ok = match exact {
            Some(v) => (delta - v).abs() <= 1e-10,
            None => delta >= bound - 1e-8,
        };
        if !ok {
            failures.push(format!("{} δ={delta}", label(spec)));
        }
    }
    outcome(failures.is_empty(), format!("{} cells, failures: {:?}", cells.len(), failures))
}

// 5
fn quotient_implication() -> Outcome {
    let mut failures = Vec::new();
    let mut tightest = f64::INFINITY;
    let cells = delta_cells();
    for (spec, _, _, radius) in &cells {
        let points = SampleConfig::new(*radius, 1e-3, 10_000, SEED);
        let pairs = points.with_count(100_000);
        let report = certify(spec, &points, &pairs).unwrap();
        let c = theoretical_c(report.delta_inf, spec.p()).unwrap();
        tightest = tightest.min(report.empirical_a3_min - c);
        if report.empirical_a3_min < c - 1e-10 || !report.passed() {
            failures.push(format!("{} A3={} C={c}", label(spec), report.empirical_a3_min));
        }
    }
    outcome(
        failures.is_empty(),
        format!("{} cells, min(A3 − C) = {tightest:.3e}, failures: {:?}", cells.len(), failures),
    )
}

// 6
fn linear_sanity() -> Outcome {
    let spec = FamilySpecF64::example1(2.0, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let mut worst = 0.0_f64;
    for _ in 0..20 {
        let x = random_admissible(&mut rng, 3, 10.0);
        let y = random_admissible(&mut rng, 3, 10.0);
        worst = worst.max((monotone_gap_ratio(&spec, &x, &y).unwrap() - 1.0).abs());
    }
    let spec = FamilySpecF64::example1(2.0, 1).unwrap();
    let load = LoadSpecF64::sine(1.0 + PI * PI);
    let error = |m: usize| {
        let mesh = Mesh1D::new(m).unwrap();
        let res = solve_elliptic(&spec, mesh, &load, &SolveConfigF64::default()).unwrap();
        let exact = DiscreteFunctionF64::interpolate(mesh, |x| (PI * x).sin());
        (res.converged, res.solution.max_abs_diff(&exact).unwrap())
    };
    let (c32, e32) = error(32);
    let (c64, e64) = error(64);
    let ratio = e32 / e64;
    outcome(
        worst <= 1e-12 && c32 && c64 && e64 <= 2e-3 && (3.2..=4.8).contains(&ratio),
        format!("ratio dev {worst:.1e}, error(64) = {e64:.2e}, error ratio 32/64 = {ratio:.3}"),
    )
}

fn n1_families() -> Vec<FamilySpecF64> {
    vec![
        FamilySpecF64::example1(3.0, 1).unwrap(),
        FamilySpecF64::example1(4.0, 1).unwrap(),
        FamilySpecF64::example2(3.0, 1).unwrap(),
        FamilySpecF64::example3_default(3.0, 1, 1.0).unwrap(),
        FamilySpecF64::example4(3.0, 1, 0).unwrap(),
        FamilySpecF64::example4_high_p(5.0, 1, 0, 3.0).unwrap(),
        FamilySpecF64::example5_calibrated(3.0, 1, 1.0).unwrap(),
    ]
}

// 7
fn discrete_monotonicity() -> Outcome {
    let mesh = Mesh1D::new(16).unwrap();
    let mut failures = Vec::new();
    let mut details = Vec::new();
    for spec in n1_families() {
        // the high-p modulus is approached only as |ξ| → ∞
        let radius = match spec.variant() {
            monokit::Variant::Example5 => 1.5,
            monokit::Variant::Example4HighP => 1e4,
            _ => 10.0,
        };
        let delta = delta_scan(&spec, &SampleConfig::new(radius, 1e-3, 10_000, SEED)).unwrap();
        let c = theoretical_c(delta, spec.p()).unwrap();
        let min = discrete_monotonicity_check(&spec, mesh, 1000, SEED).unwrap();
        details.push(format!("{} {min:.4}≥{c:.4}", spec.variant()));
        if min < c - 1e-8 {
            failures.push(label(&spec));
        }
    }
    outcome(failures.is_empty(), format!("{}; failures: {:?}", details.join(", "), failures))
}

// 8
fn uniqueness() -> Outcome {
    let mesh = Mesh1D::new(32).unwrap();
    let mut worst = 0.0_f64;
    let mut all_converged = true;
    for p in [2.0, 3.0] {
        let spec = FamilySpecF64::example1(p, 1).unwrap();
        let sols: Vec<DiscreteFunctionF64> = (0..5)
            .map(|k| {
                let guess = random_discrete_function(mesh, 2.0, SEED, k);
                let cfg = SolveConfigF64::default().with_initial_guess(guess);
                let res = solve_elliptic(&spec, mesh, &LoadSpecF64::sine(1.0), &cfg).unwrap();
                all_converged &= res.converged;
                res.solution
            })
            .collect();
        for a in &sols {
            for b in &sols {
                worst = worst.max(a.max_abs_diff(b).unwrap());
            }
        }
    }
    outcome(all_converged && worst <= 1e-8, format!("max pairwise nodal distance {worst:.1e}"))
}

// 9
fn continuous_dependence() -> Outcome {
    let spec = FamilySpecF64::example1(4.0, 1).unwrap();
    let mesh = Mesh1D::new(16).unwrap();
    let c_h = discrete_monotonicity_check(&spec, mesh, 1000, SEED).unwrap();
    let mut held = 0;
    let mut min_slack = f64::INFINITY;
    for k in 0..20 {
        let l1 = random_polynomial_load(5.0, SEED, 2 * k);
        let l2 = random_polynomial_load(5.0, SEED, 2 * k + 1);
        match continuous_dependence_check(&spec, mesh, &l1, &l2, &SolveConfigF64::default(), c_h) {
            Ok(cd) => {
                held += cd.holds as usize;
                min_slack = min_slack.min(cd.lhs / cd.rhs);
            }
            Err(e) => println!("    load pair {k}: {e}"),
        }
    }
    outcome(held == 20, format!("{held}/20 hold, C_h = {c_h:.6}, min lhs/rhs = {min_slack:.4}"))
}

/// `d_m` of the linear problem from dense matrix powers of `(M + τK)⁻¹M`.
fn linear_oracle_distances(mesh: Mesh1D, initial: &DiscreteFunctionF64, stationary: &DiscreteFunctionF64, tau: f64, steps: usize) -> Vec<f64> {
    let spec = FamilySpecF64::example1(2.0, 1).unwrap();
    let n = mesh.interior_count();
    let mass = mass_matrix::<f64>(mesh);
    let stiff = assemble_tangent(&spec, initial).unwrap();
    let mut e = initial.sub(stationary).unwrap().into_values();
    let mut out = Vec::with_capacity(steps + 1);
    for _ in 0..=steps {
        out.push(wp_norm(&DiscreteFunctionF64::new(mesh, e.clone()).unwrap(), 2.0).unwrap());
        let mut a: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| mass.get(i, j) + tau * stiff.get(i, j)).collect())
            .collect();
        let mut b = mass.mul_vec(&e);
        for col in 0..n {
            let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
            a.swap(col, piv);
            b.swap(col, piv);
            for row in col + 1..n {
                let f = a[row][col] / a[col][col];
                for k in col..n {
                    a[row][k] -= f * a[col][k];
                }
                b[row] -= f * b[col];
            }
        }
        for row in (0..n).rev() {
            let s: f64 = (row + 1..n).map(|k| a[row][k] * e[k]).sum();
            e[row] = (b[row] - s) / a[row][row];
        }
    }
    out
}

// 10
fn stabilization() -> Outcome {
    let mesh = Mesh1D::new(32).unwrap();
    let mut pass = true;
    let mut details = Vec::new();
    for p in [2.0, 3.0] {
        let spec = FamilySpecF64::example1(p, 1).unwrap();
        let cfg = ParabolicConfigF64 {
            horizon: 2.0,
            steps: 40,
            initial_data: random_discrete_function(mesh, 1.0, SEED, 0),
            load: LoadSpecF64::sine(1.0),
            solver: SolveConfigF64::default(),
        };
        let run = stabilization_run(&spec, &cfg).unwrap();
        let strictly = run.distances.windows(2).all(|w| w[1] <= w[0] + 1e-12);
        let decayed = run.last() <= 1e-6 * run.first().max(1e-12);
        pass &= run.monotone && strictly && decayed;
        details.push(format!("p={p}: d_0={:.3e} d_M={:.3e}", run.first(), run.last()));
        if p == 2.0 {
            let oracle = linear_oracle_distances(mesh, &cfg.initial_data, &run.stationary, cfg.tau(), cfg.steps);
            let dev = oracle
                .iter()
                .zip(&run.distances)
                .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
            pass &= dev <= 1e-8;
            details.push(format!("linear oracle dev {dev:.1e}"));
        }
    }
    outcome(pass, details.join(", "))
}

fn report_bytes(spec: &FamilySpecF64, radius: f64) -> (String, String) {
    let points = SampleConfig::new(radius, 1e-3, 10_000, SEED);
    let report: MonotonicityReportF64 = certify(spec, &points, &points.with_count(100_000)).unwrap();
    (serde_json::to_string_pretty(&report).unwrap(), report.to_csv())
}

fn solver_bytes() -> (String, String, String) {
    let spec = FamilySpecF64::example1(3.0, 1).unwrap();
    let mesh = Mesh1D::new(32).unwrap();
    let res = solve_elliptic(&spec, mesh, &LoadSpecF64::sine(1.0), &SolveConfigF64::default()).unwrap();
    let cfg = ParabolicConfigF64 {
        horizon: 2.0,
        steps: 40,
        initial_data: random_discrete_function(mesh, 1.0, SEED, 0),
        load: LoadSpecF64::sine(1.0),
        solver: SolveConfigF64::default(),
    };
    let run = stabilization_run(&spec, &cfg).unwrap();
    (res.to_json(), res.solution.to_csv(), run.to_csv())
}

// 11
fn reproducibility() -> Outcome {
    let dir = std::env::temp_dir().join(format!("monokit-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mut identical = true;
    let mut files = 0;
    let cells = [
        (FamilySpecF64::example3_default(3.0, 2, 1.0).unwrap(), 10.0),
        (FamilySpecF64::example5_calibrated(3.0, 1, 1.0).unwrap(), 1.5),
    ];
    let produce = |threads: usize| -> Vec<(String, String)> {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let mut out = Vec::new();
            for (i, (spec, radius)) in cells.iter().enumerate() {
                let (json, csv) = report_bytes(spec, *radius);
                out.push((format!("report{i}.json"), json));
                out.push((format!("report{i}.csv"), csv));
            }
            let mesh = Mesh1D::new(16).unwrap();
            let min = discrete_monotonicity_check(&cells[1].0, mesh, 1000, SEED).unwrap();
            out.push(("discrete.txt".into(), format!("{min:e}\n")));
            let (solve, solution, decay) = solver_bytes();
            out.push(("solve.json".into(), solve));
            out.push(("solution.csv".into(), solution));
            out.push(("decay.csv".into(), decay));
            out
        })
    };
    let runs = [produce(1), produce(1), produce(4)];
    for (r, run) in runs.iter().enumerate() {
        for (name, text) in run {
            std::fs::write(dir.join(format!("{r}-{name}")), text).unwrap();
        }
    }
    for (name, _) in &runs[0] {
        let first = std::fs::read(dir.join(format!("0-{name}"))).unwrap();
        for r in 1..runs.len() {
            identical &= std::fs::read(dir.join(format!("{r}-{name}"))).unwrap() == first;
        }
        files += 1;
    }
    let _ = std::fs::remove_dir_all(&dir);
    outcome(identical, format!("{files} files × 3 runs (1, 1, 4 threads)"))
}

fn main() {
    let results = [
        run(1, "lemma sharpness", Some(Duration::from_secs(1)), lemma_sharpness),
        run(2, "lemma bound", Some(Duration::from_secs(5)), lemma_bound),
        run(3, "jacobian correctness", Some(Duration::from_secs(5)), jacobian_correctness),
        run(4, "pointwise delta", Some(Duration::from_secs(60)), delta_reproduction),
        run(5, "quotient implication", Some(Duration::from_secs(120)), quotient_implication),
        run(6, "linear sanity", None, linear_sanity),
        run(7, "discrete uniform monotonicity", None, discrete_monotonicity),
        run(8, "uniqueness", None, uniqueness),
        run(9, "continuous dependence", None, continuous_dependence),
        run(10, "stabilization", Some(Duration::from_secs(30)), stabilization),
        run(11, "reproducibility", None, reproducibility),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
