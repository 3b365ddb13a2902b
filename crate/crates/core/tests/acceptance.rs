//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines always reach the output.
//! The process fails if any criterion fails in a way not listed under
//! [`KNOWN_DEVIATIONS`].

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use bpvp::certify::{check_ekeland, implication_counts, Certificate, Context};
use bpvp::cli::{self, bench_rows, BenchArgs, OracleArg, Setup};
use bpvp::problems::{corpus, fixture_by_name, validate, DeltaSeq, EpsRule, Horizon, Problem, Schedule};
use bpvp::slope::{nonlocal_slope, PerturbationSeries};
use bpvp::solver::{run, ExhaustiveOracle, RunResult, SlackOracle, TraceFile};
use bpvp::spaces::{metric_as_gauge, GaugeSpec};

/// Criterion 2: `|margin(iii)|` on the tight run.
const TIGHT_TOL: f64 = 1e-12;
/// Criterion 7: finite differences against the analytic derivative.
const FD_TOL: f64 = 1e-5;
const FD_STEPS: [f64; 2] = [1e-2, 1e-3];
/// Criterion 9: detected share of single-field mutations.
const MUTATION_RATE: f64 = 0.95;
/// Criterion 1: wall-clock budget for the whole grid of runs.
const SUITE_SECONDS: f64 = 60.0;
const RANDOM_SEEDS: u64 = 20;

/// Entries that can fail without the triangle inequality when `N < ∞`:
/// `f = |x|`, `ρ = d²`, `x0 = 1.5`, `δ_0 = 1`, `N = 1` gives `x̄ = 0.5`
/// while `f(0) + ρ(0, 0.5) = 0.25 < f(0.5)`.
const KNOWN_DEVIATIONS: [&str; 4] = ["iv", "C4-21", "C4-22", "ss10-2"];

struct Outcome {
    pass: bool,
    /// Fails only through [`KNOWN_DEVIATIONS`].
    explained: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: String) -> Self {
        Outcome { pass, explained: false, detail }
    }
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("bpvp").chain(args.iter().copied());
    let code = cli::main_with(argv, &mut out, &mut err);
    (code, String::from_utf8_lossy(&out).into_owned(), String::from_utf8_lossy(&err).into_owned())
}

/// `solve` then `verify` through the command layer; returns both exit codes
/// and the certificate.
fn solve_verify(dir: &Path, tag: &str, config: &[&str]) -> (i32, i32, Option<Certificate>) {
    let trace = dir.join(format!("{tag}.csv")).display().to_string();
    let cert = dir.join(format!("{tag}.json")).display().to_string();
    let mut solve = vec!["solve"];
    solve.extend_from_slice(config);
    solve.extend_from_slice(&["--out-trace", &trace]);
    let (s, _, _) = cli(&solve);
    let mut verify = vec!["verify"];
    verify.extend_from_slice(config);
    verify.extend_from_slice(&["--trace", &trace, "--out-cert", &cert]);
    let (v, _, _) = cli(&verify);
    let c = std::fs::read_to_string(&cert).ok().and_then(|t| Certificate::from_json(&t).ok());
    (s, v, c)
}

fn criterion_1(dir: &Path) -> Outcome {
    let start = Instant::now();
    let mut runs = 0;
    let mut passed = 0;
    let mut explained: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let mut unexplained = Vec::new();
    for fx in corpus() {
        for n in ["1", "3", "inf"] {
            let name = format!("corpus:{}", fx.name);
            let tag = format!("c1-{}-{n}", fx.name);
            let (s, v, cert) = solve_verify(dir, &tag, &[&name, "--N", n, "--cap", "40"]);
            runs += 1;
            if s == 0 && v == 0 {
                passed += 1;
                continue;
            }
            let failing: Vec<String> =
                cert.map(|c| c.failures().map(|e| e.name.clone()).collect()).unwrap_or_default();
            let gauge = fx.gauge.build().expect("corpus gauge");
            let known = s == 0
                && !gauge.has_triangle()
                && n != "inf"
                && !failing.is_empty()
                && failing.iter().all(|f| KNOWN_DEVIATIONS.contains(&f.as_str()));
            if known {
                explained.insert(format!("{} N={n}", fx.name), failing);
            } else {
                unexplained.push(format!("{} N={n} (solve {s}, verify {v}, failing {failing:?})", fx.name));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let mut detail = format!("{passed}/{runs} solve+verify runs pass in {secs:.1}s (budget {SUITE_SECONDS}s)");
    if !explained.is_empty() {
        let list: Vec<String> = explained.iter().map(|(k, v)| format!("{k}: {}", v.join(","))).collect();
        detail.push_str(&format!("; strict finite-horizon entries fail without the triangle inequality: {}", list.join("; ")));
    }
    if !unexplained.is_empty() {
        detail.push_str(&format!("; other failures: {}", unexplained.join("; ")));
    }
    let pass = passed == runs && secs < SUITE_SECONDS;
    Outcome { pass, explained: unexplained.is_empty() && secs < SUITE_SECONDS, detail }
}

fn criterion_2(dir: &Path) -> Outcome {
    let config = ["corpus:P3", "--gauge", "metric", "--N", "1", "--delta0", "0.5", "--eps", "2"];
    let trace = dir.join("c2.csv").display().to_string();
    let mut solve = vec!["solve"];
    solve.extend_from_slice(&config);
    solve.extend_from_slice(&["--out-trace", &trace]);
    let (_, out, _) = cli(&solve);
    let xbar = out.lines().find_map(|l| l.strip_prefix("xbar")).map(str::trim).unwrap_or("?").to_string();
    let (s, v, cert) = solve_verify(dir, "c2", &config);
    let margin = cert.as_ref().and_then(|c| c.get("iii")).map_or(f64::NAN, |e| e.margin);
    let pass = s == 0 && v == 0 && xbar == "p2" && margin.abs() <= TIGHT_TOL;
    Outcome::new(pass, format!("xbar = {xbar}, margin(iii) = {margin} (tol {TIGHT_TOL})"))
}

fn criterion_3(dir: &Path) -> Outcome {
    let fx = fixture_by_name("EQUALITY-EDGE").expect("fixture");
    let g = metric_as_gauge();
    let edge = Schedule::standard(fx.problem.epsilon, 1.0, Horizon::Finite(1), fx.problem.space.kind()).unwrap();
    let low = Schedule::standard(fx.problem.epsilon, 0.99, Horizon::Finite(1), fx.problem.space.kind()).unwrap();
    let at_edge = validate(&fx.problem, &g, &edge).expect("validate");
    let below = validate(&fx.problem, &g, &low).expect("validate");
    let (s, v, _) = solve_verify(dir, "c3", &["corpus:EQUALITY-EDGE", "--N", "1", "--delta0", "1"]);
    let valid = at_edge.eps_min_ok && at_edge.ies2_ok && at_edge.weak_min_ok;
    let pass = valid && s == 0 && v == 0 && !below.ies2_ok;
    Outcome::new(
        pass,
        format!(
            "delta0 = 1: hypotheses {valid}, solve {s}, verify {v}; delta0 = 0.99: ies2 {} (slack {})",
            below.ies2_ok, below.ies2_slack
        ),
    )
}

/// The three Ekeland conclusions straight from the problem data.
fn ekeland_by_enumeration(pr: &Problem, xbar: usize, lambda: f64) -> bool {
    let d = |x: usize, y: usize| pr.space.distance(x, y);
    let w = pr.epsilon / lambda;
    let x0 = pr.x0;
    let fbar = pr.f(xbar).value();
    let near = d(xbar, x0) <= lambda;
    let descent = fbar + w * d(xbar, x0) <= pr.f0();
    let strict = pr.space.points().filter(|&x| x != xbar).all(|x| {
        let fx = pr.f(x);
        fx.is_infinite() || fx.value() + w * d(x, xbar) > fbar
    });
    near && descent && strict
}

fn ekeland_run(seed: u64) -> (Problem, f64, Setup, RunResult) {
    let pr = fixture_by_name(&format!("RANDOM-{seed}")).expect("fixture").problem;
    // δ_0 = ε/λ = 1 satisfies ies2 because f(x0) ≤ inf f + ε
    let lambda = pr.epsilon;
    let args = cli::RunArgs {
        problem: format!("corpus:RANDOM-{seed}"),
        gauge: None,
        p: None,
        horizon: None,
        delta0: None,
        delta_rule: None,
        eps: None,
        lambda: Some(lambda),
        eps_rule: None,
        cap: None,
        tol_d: None,
        tol_cert: None,
        mode: cli::Mode::Ekeland,
    };
    let setup = Setup::from_args(&args).expect("ekeland setup");
    let r = setup.solve(&mut ExhaustiveOracle).expect("run");
    (pr, lambda, setup, r)
}

fn criterion_4() -> Outcome {
    let mut ok = 0;
    let mut agree = 0;
    for seed in 0..RANDOM_SEEDS {
        let (pr, lambda, setup, r) = ekeland_run(seed);
        let independent = ekeland_by_enumeration(&pr, r.xbar, lambda);
        let entries = check_ekeland(&r, &setup.problem, &setup.gauge, &setup.schedule, lambda).expect("T3 entries");
        let library = entries.iter().all(|e| e.holds);
        ok += usize::from(independent);
        agree += usize::from(independent == library);
    }
    let n = RANDOM_SEEDS as usize;
    Outcome::new(ok == n && agree == n, format!("{ok}/{n} runs satisfy the three conclusions by enumeration; certificate agrees on {agree}/{n}"))
}

fn criterion_5() -> Outcome {
    let a = BenchArgs { seeds: RANDOM_SEEDS, seed: 0, oracle: OracleArg::Slack, slack_fraction: 0.9, out_csv: None };
    let rows = bench_rows(&a).expect("bench");
    let mut fixtures: BTreeMap<u64, bool> = BTreeMap::new();
    for r in &rows {
        *fixtures.entry(r.seed).or_insert(true) &= r.overall;
    }
    let good = fixtures.values().filter(|&&v| v).count();
    let used_slack = rows.iter().filter(|r| r.steps > 1).count();
    Outcome::new(
        good == fixtures.len() && fixtures.len() == RANDOM_SEEDS as usize,
        format!(
            "{good}/{} fixtures certify under the 0.9-slack oracle ({} runs, {used_slack} with more than one step)",
            fixtures.len(),
            rows.len()
        ),
    )
}

fn criterion_6() -> Outcome {
    let mut bound_ok = 0;
    let mut pointwise_ok = 0;
    let mut min_margin = f64::INFINITY;
    for seed in 0..RANDOM_SEEDS {
        let (pr, lambda, setup, r) = ekeland_run(seed);
        let ctx = Context::new(&r, &setup.problem, &setup.gauge, &setup.schedule).expect("context");
        let series = PerturbationSeries::from_run(&ctx).expect("series");
        let rep = nonlocal_slope(&pr, &series, r.xbar).expect("slope");
        let bound = pr.epsilon / lambda;
        let margin = bound - rep.value;
        min_margin = min_margin.min(margin);
        let strict_needed = pr.space.len() > 1;
        bound_ok += usize::from(if strict_needed { margin > 0.0 } else { margin >= 0.0 });
        // pointwise: f(x̄) − f(u) < (ε/λ)(g(u) − g(x̄)) for g(u) > g(x̄)
        let g = |u: usize| series.eval_g(&pr.space, u).value;
        let gbar = g(r.xbar);
        let fbar = pr.f(r.xbar).value();
        let tol = setup.schedule.tol_cert;
        let holds = pr.space.points().filter(|&u| g(u) > gbar).all(|u| {
            let gu = g(u);
            gu.is_infinite() || (fbar - pr.f(u).value()).max(0.0) < bound * gu.minus(gbar) + tol
        });
        pointwise_ok += usize::from(holds);
        let cert = setup.certify(&r).expect("certify");
        let entries_hold = ["slope-bound", "slope-pointwise"].iter().all(|n| cert.get(n).is_some_and(|e| e.holds));
        if !entries_hold {
            pointwise_ok = pointwise_ok.saturating_sub(1);
        }
    }
    let n = RANDOM_SEEDS as usize;
    Outcome::new(
        bound_ok == n && pointwise_ok == n,
        format!("slope below eps/lambda on {bound_ok}/{n} (smallest margin {min_margin}); pointwise form on {pointwise_ok}/{n}"),
    )
}

fn criterion_7() -> Outcome {
    let setup = Setup::from_args(&cli::RunArgs {
        problem: "corpus:LINE-ABS".into(),
        gauge: None,
        p: Some(2.0),
        horizon: Some(Horizon::Infinite),
        delta0: Some(1.0),
        delta_rule: None,
        eps: None,
        lambda: Some(1.0),
        eps_rule: None,
        cap: None,
        tol_d: None,
        tol_cert: None,
        mode: cli::Mode::T4,
    })
    .expect("t4 setup");
    let r = setup.solve(&mut SlackOracle::new(11, 0.9).expect("oracle")).expect("run");
    let grid = setup.problem.space.as_grid().expect("grid");
    let t4 = setup.request.t4.clone().expect("t4 params");
    // raw weights δ_i on x_0..x_T and the remaining tail on x̄
    let mut centers: Vec<(f64, f64)> = r.trace.iterates.iter().map(|it| (grid.coords(it.point)[0], t4.delta.get(it.index))).collect();
    let t = r.trace.iterates.len() - 1;
    centers.push((grid.coords(r.xbar)[0], t4.delta.tail_sum(t)));
    let g = |y: f64| centers.iter().map(|(c, w)| w * (y - c).powi(2)).sum::<f64>();
    let dg = |y: f64| centers.iter().map(|(c, w)| 2.0 * w * (y - c)).sum::<f64>();
    let y = grid.coords(r.xbar)[0];
    let errs: Vec<f64> = FD_STEPS.iter().map(|h| ((g(y + h) - g(y - h)) / (2.0 * h) - dg(y)).abs()).collect();
    let cert = setup.certify(&r).expect("certify");
    let entry = cert.get("T4-smooth").map_or(false, |e| e.holds);
    let pass = errs.iter().all(|e| *e <= FD_TOL) && entry && cert.overall;
    Outcome::new(
        pass,
        format!("T = {t}, |FD - analytic| = {errs:?} at steps {FD_STEPS:?} (tol {FD_TOL}); T4-smooth {entry}; certificate {}", cert.overall),
    )
}

fn criterion_8() -> Outcome {
    let g = metric_as_gauge();
    let mut instances = 0;
    let mut violations = 0;
    let mut runs = 0;
    let mut problems: Vec<(String, Problem, f64)> = corpus()
        .into_iter()
        .filter(|f| f.gauge == GaugeSpec::Metric)
        .map(|f| (f.name.clone(), f.problem, f.schedule.delta0()))
        .collect();
    for seed in 0..RANDOM_SEEDS {
        let fx = fixture_by_name(&format!("RANDOM-{seed}")).expect("fixture");
        problems.push((fx.name, fx.problem, fx.schedule.delta0()));
    }
    for (_, pr, delta0) in &problems {
        for n in [1, 2, 3, 5] {
            let horizon = Horizon::Finite(n);
            for delta in [DeltaSeq::geometric(*delta0, 0.5, horizon), DeltaSeq::harmonic(*delta0, horizon)] {
                let sch = Schedule::new(
                    delta.expect("delta"),
                    EpsRule::Standard { epsilon: pr.epsilon, delta0: *delta0 },
                    40,
                    1e-9,
                    1e-9,
                )
                .expect("schedule");
                for seed in 0..3u64 {
                    let r = run(pr, &g, &sch, &mut SlackOracle::new(seed, 0.9).expect("oracle")).expect("run");
                    let ctx = Context::new(&r, pr, &g, &sch).expect("context");
                    let c = implication_counts(&ctx).expect("finite horizon");
                    instances += c.instances;
                    violations += c.violations();
                    runs += 1;
                }
            }
        }
    }
    Outcome::new(
        violations == 0 && instances > 0,
        format!("{violations} implication violations over {instances} instances in {runs} metric runs with N < inf"),
    )
}

fn mutants(tf: &TraceFile, points: usize) -> Vec<(String, TraceFile)> {
    let mut out = Vec::new();
    for (k, row) in tf.rows.iter().enumerate() {
        let mut m = tf.clone();
        m.rows[k].f += 0.1;
        out.push((format!("row {k} f"), m));
        if let Some(r) = row.rho_next {
            let mut m = tf.clone();
            m.rows[k].rho_next = Some(r + 0.1);
            out.push((format!("row {k} rho_next"), m));
        }
        for x in (0..points).filter(|&x| x != row.x) {
            let mut m = tf.clone();
            m.rows[k].x = x;
            out.push((format!("row {k} x -> {x}"), m));
        }
    }
    out
}

fn criterion_9(dir: &Path) -> Outcome {
    let configs: [&[&str]; 3] = [
        &["corpus:P3", "--N", "1", "--delta0", "0.5", "--eps", "2"],
        &["corpus:P3", "--N", "3", "--delta0", "0.5", "--eps", "2", "--oracle", "slack", "--seed", "4"],
        &["corpus:P3", "--N", "inf", "--delta0", "0.5", "--eps", "2", "--oracle", "slack", "--seed", "4"],
    ];
    let mut total = 0;
    let mut caught = 0;
    let mut missed = Vec::new();
    for (c, config) in configs.iter().enumerate() {
        let trace = dir.join(format!("c9-{c}.csv"));
        let trace_s = trace.display().to_string();
        let mut solve = vec!["solve"];
        solve.extend_from_slice(config);
        solve.extend_from_slice(&["--out-trace", &trace_s]);
        cli(&solve);
        let original = TraceFile::read(&trace).expect("trace");
        let verify_config: Vec<&str> = config.iter().copied().take_while(|a| *a != "--oracle").collect();
        for (what, m) in mutants(&original, 3) {
            let path = dir.join(format!("c9-{c}-mutant.csv"));
            m.write(&path).expect("write");
            let p = path.display().to_string();
            let mut verify = vec!["verify"];
            verify.extend_from_slice(&verify_config);
            verify.extend_from_slice(&["--trace", &p]);
            let (code, _, _) = cli(&verify);
            total += 1;
            if code != 0 {
                caught += 1;
            } else {
                missed.push(format!("run {c} {what}"));
            }
        }
    }
    let rate = caught as f64 / total as f64;
    let mut detail = format!("{caught}/{total} single-field mutations of P3 traces rejected ({:.1}%, need {:.0}%)", rate * 100.0, MUTATION_RATE * 100.0);
    if !missed.is_empty() {
        detail.push_str(&format!("; missed: {}", missed.join(", ")));
    }
    Outcome::new(rate >= MUTATION_RATE, detail)
}

fn main() {
    let dir = tempfile::tempdir().expect("tempdir");
    let d = dir.path();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("end-to-end theorem suite", Box::new(|| criterion_1(d))),
        ("tightness case", Box::new(|| criterion_2(d))),
        ("equality edge", Box::new(|| criterion_3(d))),
        ("Ekeland cross-check", Box::new(criterion_4)),
        ("oracle-slack robustness", Box::new(criterion_5)),
        ("slope bound", Box::new(criterion_6)),
        ("smooth perturbation", Box::new(criterion_7)),
        ("triangle implications", Box::new(criterion_8)),
        ("mutation sensitivity", Box::new(|| criterion_9(d))),
    ];
    let mut unexpected = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("{tag} criterion {} ({name}): {}", k + 1, o.detail);
        if !o.pass && !o.explained {
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        println!("{unexpected} criteria failed without a documented cause");
        std::process::exit(1);
    }
}
