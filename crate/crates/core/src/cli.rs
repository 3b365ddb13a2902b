//! The `bpvp` command line: `solve`, `verify`, `slope` and `bench`.
//!
//! Every command writes to the given streams and returns its exit code, so
//! the binary is a thin wrapper and tests can drive commands in process.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::certify::{certify, Certificate, Context, EntryStatus, Request, T4Params};
use crate::error::{Error, Result};
use crate::problems::{
    default_tol_cert, fixture_by_name, validate, DeltaSeq, EpsRule, Horizon, Problem, Schedule, DEFAULT_CAP,
    DEFAULT_TOL_D,
};
use crate::slope::{local_slope, nonlocal_slope, PerturbationSeries};
use crate::solver::{run, ExhaustiveOracle, Oracle, RunResult, SlackOracle, Status, TraceFile};
use crate::spaces::{metric_as_gauge, power_norm_gauge, GaugeFunction, GaugeSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CAP: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "bpvp", version, about = "Certifying solver for the extended Borwein-Preiss principle")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate the hypotheses, run the construction and export the trace.
    Solve(SolveArgs),
    /// Re-check an exported trace and write the certificate.
    Verify(VerifyArgs),
    /// Nonlocal (and on grids, local) slope at the trace's limit point.
    Slope(SlopeArgs),
    /// Solve and certify seeded random fixtures.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GaugeArg {
    Metric,
    Power,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DeltaRule {
    /// `δ_i = δ_0 / 2^i`
    Geometric,
    /// `δ_i = δ_0 / (i + 1)`
    Harmonic,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    #[default]
    Raw,
    /// Power-norm form: the run uses `ε δ_0`, `ε_i^p` and `(ε/λ^p) δ_i`.
    T4,
    /// `N = 1`, `ρ = d`, `δ_0 = ε/λ`.
    Ekeland,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum OracleArg {
    #[default]
    Exhaustive,
    /// Seeded adversarial selection within a fraction of the allowed slack.
    Slack,
}

/// `--eps-rule`: `default` (`ε/(2^i δ_0)`) or `geometric:FIRST:RATIO`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EpsRuleArg {
    Default,
    Geometric { first: f64, ratio: f64 },
}

impl FromStr for EpsRuleArg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "default" {
            return Ok(EpsRuleArg::Default);
        }
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["geometric", first, ratio] => {
                let first = first.parse().map_err(|e| format!("bad first term: {e}"))?;
                let ratio = ratio.parse().map_err(|e| format!("bad ratio: {e}"))?;
                Ok(EpsRuleArg::Geometric { first, ratio })
            }
            _ => Err(format!("expected `default` or `geometric:FIRST:RATIO`, got {s:?}")),
        }
    }
}

fn parse_horizon(s: &str) -> std::result::Result<Horizon, String> {
    if s == "inf" {
        return Ok(Horizon::Infinite);
    }
    match s.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(Horizon::Finite(n)),
        _ => Err(format!("expected a positive integer or `inf`, got {s:?}")),
    }
}

/// Problem source, gauge, schedule and mode. Unset values fall back to the
/// corpus fixture's defaults, or for problem files to a metric gauge with
/// geometric weights, `δ_0 = 1` and `N = inf`.
#[derive(Clone, Debug, Args)]
pub struct RunArgs {
    /// Problem file, or `corpus:NAME` for a built-in fixture.
    pub problem: String,
    #[arg(long, value_enum)]
    pub gauge: Option<GaugeArg>,
    /// Exponent of the power gauge `d^p`; implies `--gauge power`.
    #[arg(long)]
    pub p: Option<f64>,
    /// Horizon: a positive integer or `inf`.
    #[arg(long = "N", value_parser = parse_horizon)]
    pub horizon: Option<Horizon>,
    #[arg(long)]
    pub delta0: Option<f64>,
    #[arg(long, value_enum)]
    pub delta_rule: Option<DeltaRule>,
    /// Overrides the problem's epsilon.
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub eps_rule: Option<EpsRuleArg>,
    #[arg(long)]
    pub cap: Option<usize>,
    #[arg(long)]
    pub tol_d: Option<f64>,
    #[arg(long)]
    pub tol_cert: Option<f64>,
    #[arg(long, value_enum, default_value_t)]
    pub mode: Mode,
}

#[derive(Clone, Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long, value_enum, default_value_t)]
    pub oracle: OracleArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.9)]
    pub slack_fraction: f64,
    #[arg(long)]
    pub out_trace: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long)]
    pub trace: PathBuf,
    #[arg(long)]
    pub out_cert: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct SlopeArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long)]
    pub trace: PathBuf,
    /// Radii for the local slope on grids, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub radii: Vec<f64>,
}

#[derive(Clone, Debug, Args)]
pub struct BenchArgs {
    /// Number of random fixtures.
    #[arg(long, default_value_t = 20)]
    pub seeds: u64,
    /// First fixture seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t)]
    pub oracle: OracleArg,
    #[arg(long, default_value_t = 0.9)]
    pub slack_fraction: f64,
    /// Per-run CSV detail file.
    #[arg(long)]
    pub out_csv: Option<PathBuf>,
}

/// Everything a run or a verification needs, resolved from [`RunArgs`].
#[derive(Clone, Debug)]
pub struct Setup {
    /// The problem the construction runs on (substituted in T4 mode).
    pub problem: Problem,
    pub gauge: GaugeFunction,
    pub schedule: Schedule,
    pub request: Request,
    /// Whether solve insists on the `ies2` lower bound for `δ_0`.
    pub require_ies2: bool,
}

impl Setup {
    pub fn from_args(a: &RunArgs) -> Result<Self> {
        let (mut problem, base, base_gauge) = match a.problem.strip_prefix("corpus:") {
            Some(name) => {
                let fx = fixture_by_name(name)?;
                (fx.problem, Some(fx.schedule), fx.gauge)
            }
            None => (Problem::read(Path::new(&a.problem)).map_err(|e| with_path(e, &a.problem))?, None, GaugeSpec::Metric),
        };
        if let Some(eps) = a.eps {
            problem = problem.with_epsilon(eps)?;
        }
        let epsilon = problem.epsilon;
        let gauge_spec = match (a.gauge, a.p) {
            (Some(GaugeArg::Metric), Some(_)) => {
                return Err(Error::InvalidParameter("--p needs --gauge power".into()));
            }
            (Some(GaugeArg::Metric), None) => GaugeSpec::Metric,
            (Some(GaugeArg::Power), None) => {
                return Err(Error::InvalidParameter("--gauge power needs --p".into()));
            }
            (_, Some(p)) => GaugeSpec::Power(p),
            (None, None) => base_gauge,
        };
        if a.mode != Mode::Raw && a.lambda.is_none() {
            return Err(Error::InvalidParameter("--lambda is required in t4 and ekeland modes".into()));
        }
        if let Some(l) = a.lambda {
            if !(l.is_finite() && l > 0.0) {
                return Err(Error::InvalidParameter(format!("lambda must be positive, got {l}")));
            }
        }

        let base_delta0 = base.as_ref().map_or(1.0, Schedule::delta0);
        let base_horizon = base.as_ref().map_or(Horizon::Infinite, Schedule::horizon);
        let kind = problem.space.kind();
        let cap = a.cap.or(base.as_ref().map(|s| s.cap)).unwrap_or(DEFAULT_CAP);
        let tol_d = a.tol_d.or(base.as_ref().map(|s| s.tol_d)).unwrap_or(DEFAULT_TOL_D);
        let tol_cert = a.tol_cert.or(base.as_ref().map(|s| s.tol_cert)).unwrap_or_else(|| default_tol_cert(kind));
        let delta_seq = |delta0: f64, horizon: Horizon| -> Result<DeltaSeq> {
            match a.delta_rule.unwrap_or(DeltaRule::Geometric) {
                DeltaRule::Geometric => DeltaSeq::geometric(delta0, 0.5, horizon),
                DeltaRule::Harmonic => DeltaSeq::harmonic(delta0, horizon),
            }
        };
        let eps_rule = |delta0: f64| match a.eps_rule.unwrap_or(EpsRuleArg::Default) {
            EpsRuleArg::Default => EpsRule::Standard { epsilon, delta0 },
            EpsRuleArg::Geometric { first, ratio } => EpsRule::Geometric { first, ratio },
        };

        match a.mode {
            Mode::Raw => {
                let gauge = gauge_spec.build()?;
                let delta0 = a.delta0.or(a.lambda.map(|l| epsilon / l)).unwrap_or(base_delta0);
                let horizon = a.horizon.unwrap_or(base_horizon);
                let untouched = a.delta0.is_none()
                    && a.lambda.is_none()
                    && a.horizon.is_none()
                    && a.delta_rule.is_none()
                    && a.eps.is_none()
                    && a.eps_rule.is_none();
                let schedule = match base {
                    Some(b) if untouched => Schedule::new(b.delta, b.eps, cap, tol_d, tol_cert)?,
                    _ => Schedule::new(delta_seq(delta0, horizon)?, eps_rule(delta0), cap, tol_d, tol_cert)?,
                };
                Ok(Setup {
                    problem,
                    gauge,
                    schedule,
                    request: Request { lambda: a.lambda, ..Request::default() },
                    require_ies2: false,
                })
            }
            Mode::Ekeland => {
                let lambda = a.lambda.expect("checked above");
                if gauge_spec != GaugeSpec::Metric || a.gauge == Some(GaugeArg::Power) {
                    return Err(Error::InvalidParameter("ekeland mode uses the metric gauge".into()));
                }
                if a.horizon.is_some_and(|h| h != Horizon::Finite(1)) {
                    return Err(Error::InvalidParameter("ekeland mode has N = 1".into()));
                }
                let delta0 = epsilon / lambda;
                if a.delta0.is_some_and(|d| d != delta0) {
                    return Err(Error::InvalidParameter(format!("ekeland mode fixes delta_0 = eps/lambda = {delta0}")));
                }
                let eps = match a.eps_rule {
                    Some(_) => eps_rule(delta0),
                    None => EpsRule::Geometric { first: epsilon / 2.0, ratio: 0.5 },
                };
                let schedule = Schedule::new(DeltaSeq::geometric(delta0, 0.5, Horizon::Finite(1))?, eps, cap, tol_d, tol_cert)?;
                Ok(Setup {
                    problem,
                    gauge: metric_as_gauge(),
                    schedule,
                    request: Request { lambda: Some(lambda), ekeland: true, ..Request::default() },
                    require_ies2: false,
                })
            }
            Mode::T4 => {
                let lambda = a.lambda.expect("checked above");
                let p = match gauge_spec {
                    GaugeSpec::Metric => 1.0,
                    GaugeSpec::Power(p) => p,
                };
                let horizon = a.horizon.unwrap_or(Horizon::Infinite);
                let delta0 = a.delta0.unwrap_or(base_delta0);
                let params = T4Params::new(lambda, p, epsilon, delta_seq(delta0, horizon)?, eps_rule(delta0))?;
                let (problem, schedule) = params.substituted(&problem, cap, tol_d, tol_cert)?;
                Ok(Setup {
                    problem,
                    gauge: power_norm_gauge(p)?,
                    schedule,
                    request: Request { lambda: Some(lambda), t4: Some(params), ekeland: false },
                    require_ies2: true,
                })
            }
        }
    }

    /// Checks the hypotheses and runs the construction.
    pub fn solve(&self, oracle: &mut dyn Oracle) -> Result<RunResult> {
        let report = validate(&self.problem, &self.gauge, &self.schedule)?;
        if !report.weak_min_ok {
            return Err(Error::InvalidParameter(format!(
                "x0 is not an epsilon-minimizer in the weak sense (slack {} at point {:?})",
                report.weak_min_slack, report.weak_min_witness
            )));
        }
        if self.require_ies2 && !report.ies2_ok {
            return Err(Error::InvalidParameter(format!("delta_0 is below (f(x0) - inf f)/eps by {}", -report.ies2_slack)));
        }
        run(&self.problem, &self.gauge, &self.schedule, oracle)
    }

    pub fn trace_file(&self, result: &RunResult) -> TraceFile {
        TraceFile::from_run(result, &self.problem.name, self.gauge.description(), &self.schedule.horizon().to_string())
    }

    /// Reads a trace and checks that its header matches this setup.
    pub fn load_trace(&self, path: &Path) -> Result<RunResult> {
        let tf = TraceFile::read(path).map_err(|e| with_path(e, &path.display().to_string()))?;
        let expect = [
            ("problem", tf.meta.problem.as_str(), self.problem.name.clone()),
            ("gauge", tf.meta.gauge.as_str(), self.gauge.description().to_string()),
            ("horizon", tf.meta.horizon.as_str(), self.schedule.horizon().to_string()),
        ];
        for (what, found, want) in expect {
            if found != want {
                return Err(Error::TraceMismatch(format!("trace {what} is {found:?}, configuration has {want:?}")));
            }
        }
        tf.to_run_result(&self.problem)
    }

    pub fn certify(&self, result: &RunResult) -> Result<Certificate> {
        certify(result, &self.problem, &self.gauge, &self.schedule, &self.request)
    }
}

/// Io errors carry no file name of their own.
fn with_path(e: Error, path: &str) -> Error {
    match e {
        Error::Io(io) => Error::Io(std::io::Error::new(io.kind(), format!("{path}: {io}"))),
        other => other,
    }
}

fn make_oracle(kind: OracleArg, seed: u64, fraction: f64) -> Result<Box<dyn Oracle>> {
    Ok(match kind {
        OracleArg::Exhaustive => Box::new(ExhaustiveOracle),
        OracleArg::Slack => Box::new(SlackOracle::new(seed, fraction)?),
    })
}

/// Parses `args` (program name first) and runs the command.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_FAIL } else { EXIT_OK };
            let stream: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(stream, "{}", e.render());
            return code;
        }
    };
    let outcome = match &cli.command {
        Command::Solve(a) => cmd_solve(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Slope(a) => cmd_slope(a, out),
        Command::Bench(a) => cmd_bench(a, out),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAIL
        }
    }
}

pub fn cmd_solve(a: &SolveArgs, out: &mut dyn Write) -> Result<i32> {
    let setup = Setup::from_args(&a.run)?;
    let mut oracle = make_oracle(a.oracle, a.seed, a.slack_fraction)?;
    let result = setup.solve(oracle.as_mut())?;
    let space = &setup.problem.space;
    let t = result.trace.iterates.len() - 1;
    writeln!(out, "problem   {}", setup.problem.name)?;
    writeln!(out, "gauge     {}", setup.gauge.description())?;
    writeln!(out, "horizon   {}", setup.schedule.horizon())?;
    writeln!(out, "status    {}", result.status)?;
    writeln!(out, "steps     {t}")?;
    writeln!(out, "xbar      {}", space.label(result.xbar))?;
    writeln!(out, "f(xbar)   {}", setup.problem.f(result.xbar))?;
    writeln!(out, "diam      {}", result.final_diam_bound)?;
    if let Some(path) = &a.out_trace {
        setup.trace_file(&result).write(path)?;
        writeln!(out, "trace     {}", path.display())?;
    }
    Ok(if result.status == Status::CapReached { EXIT_CAP } else { EXIT_OK })
}

/// One line per entry: status, name, margin, witnesses.
pub fn render_certificate(cert: &Certificate) -> String {
    let mut s = String::new();
    for e in &cert.entries {
        let tag = match e.status {
            EntryStatus::Pass => "PASS",
            EntryStatus::Fail => "FAIL",
            EntryStatus::Skipped => "SKIP",
        };
        let w: Vec<String> = e.witnesses.iter().map(|w| w.to_string()).collect();
        let _ = write!(s, "{tag} {:<18} margin {:<24} witnesses [{}]", e.name, e.margin, w.join(","));
        if !e.note.is_empty() {
            let _ = write!(s, "  # {}", e.note);
        }
        s.push('\n');
    }
    let _ = writeln!(s, "overall {}", if cert.overall { "PASS" } else { "FAIL" });
    s
}

pub fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let setup = Setup::from_args(&a.run)?;
    let result = setup.load_trace(&a.trace)?;
    let cert = setup.certify(&result)?;
    out.write_all(render_certificate(&cert).as_bytes())?;
    if let Some(path) = &a.out_cert {
        std::fs::write(path, cert.to_json()?)?;
    }
    Ok(if cert.overall { EXIT_OK } else { EXIT_FAIL })
}

pub fn cmd_slope(a: &SlopeArgs, out: &mut dyn Write) -> Result<i32> {
    let setup = Setup::from_args(&a.run)?;
    let lambda = setup
        .request
        .lambda
        .ok_or_else(|| Error::InvalidParameter("slope needs --lambda".into()))?;
    let lambda = match &setup.request.t4 {
        Some(t4) => lambda.powf(t4.p),
        None => lambda,
    };
    let result = setup.load_trace(&a.trace)?;
    let ctx = Context::new(&result, &setup.problem, &setup.gauge, &setup.schedule)?;
    let series = PerturbationSeries::from_run(&ctx)?;
    let xbar = result.xbar;
    let space = &setup.problem.space;
    let rep = nonlocal_slope(&setup.problem, &series, xbar)?;
    let bound = setup.problem.epsilon / lambda;
    let margin = bound - rep.value;
    writeln!(out, "xbar      {}", space.label(xbar))?;
    writeln!(out, "slope     {}", rep.value)?;
    writeln!(out, "bound     {bound}")?;
    writeln!(out, "margin    {margin}")?;
    writeln!(out, "argmax    {}", rep.argmax.map_or_else(|| "-".to_string(), |u| space.label(u)))?;
    writeln!(out, "anomalies {}", rep.anomalies.len())?;
    if !crate::certify::close(setup.schedule.delta0(), bound) {
        writeln!(out, "note      delta_0 = {} is not eps/lambda; the bound does not apply", setup.schedule.delta0())?;
    }
    if !a.radii.is_empty() {
        let local = local_slope(&setup.problem, &series, xbar, &a.radii)?;
        for (r, v) in a.radii.iter().zip(local) {
            writeln!(out, "local     r={r} slope={v}")?;
        }
    }
    Ok(if margin >= -setup.schedule.tol_cert { EXIT_OK } else { EXIT_FAIL })
}

/// One bench run: fixture seed, schedule family and the certificate summary.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub seed: u64,
    pub family: &'static str,
    pub horizon: Horizon,
    pub delta0: f64,
    pub steps: usize,
    pub status: Status,
    pub overall: bool,
    pub failures: Vec<String>,
    pub iii_margin: f64,
    /// Smallest margin among evaluated entries.
    pub min_margin: f64,
}

/// The schedule families run per fixture: `N = 1`, `N = 3`, `N = inf` and
/// an equality-edge variant with `ε = f(x0) − inf f` and `δ_0 = 1`.
pub const BENCH_FAMILIES: [&str; 4] = ["N1", "N3", "Ninf", "edge"];

fn bench_schedule(problem: &Problem, family: &str, rng: &mut ChaCha8Rng) -> Result<Option<(Problem, Schedule)>> {
    let (inf, _) = problem.infimum();
    let gap = problem.f0() - inf.value();
    let kind = problem.space.kind();
    let (problem, delta0, horizon) = match family {
        "edge" => {
            if !(gap > 0.0) {
                return Ok(None);
            }
            (problem.clone().with_epsilon(gap)?, 1.0, Horizon::Finite(2))
        }
        _ => {
            let floor = (gap / problem.epsilon).max(1.0 / 16.0);
            let delta0 = floor * rng.gen_range(1.0..2.0);
            let horizon = match family {
                "N1" => Horizon::Finite(1),
                "N3" => Horizon::Finite(3),
                _ => Horizon::Infinite,
            };
            (problem.clone(), delta0, horizon)
        }
    };
    let delta = if rng.gen_bool(0.5) {
        DeltaSeq::geometric(delta0, 0.5, horizon)?
    } else {
        DeltaSeq::harmonic(delta0, horizon)?
    };
    let eps = EpsRule::Standard { epsilon: problem.epsilon, delta0 };
    let schedule = Schedule::new(delta, eps, DEFAULT_CAP, DEFAULT_TOL_D, default_tol_cert(kind))?;
    Ok(Some((problem, schedule)))
}

/// Solves, exports, re-reads and certifies every fixture and family.
pub fn bench_rows(a: &BenchArgs) -> Result<Vec<BenchRow>> {
    if a.seeds == 0 {
        return Err(Error::InvalidParameter("--seeds must be at least 1".into()));
    }
    let gauge = metric_as_gauge();
    let mut rows = Vec::new();
    for seed in a.seed..a.seed + a.seeds {
        let base = fixture_by_name(&format!("RANDOM-{seed}"))?.problem;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for family in BENCH_FAMILIES {
            let Some((problem, schedule)) = bench_schedule(&base, family, &mut rng)? else {
                continue;
            };
            let mut oracle = make_oracle(a.oracle, seed, a.slack_fraction)?;
            let result = run(&problem, &gauge, &schedule, oracle.as_mut())?;
            let text = TraceFile::from_run(&result, &problem.name, gauge.description(), &schedule.horizon().to_string())
                .to_csv_string()?;
            let replay = TraceFile::parse(&text, "bench")?.to_run_result(&problem)?;
            let cert = certify(&replay, &problem, &gauge, &schedule, &Request::default())?;
            let min_margin = cert
                .entries
                .iter()
                .filter(|e| e.status != EntryStatus::Skipped)
                .map(|e| e.margin)
                .fold(f64::INFINITY, f64::min);
            rows.push(BenchRow {
                seed,
                family,
                horizon: schedule.horizon(),
                delta0: schedule.delta0(),
                steps: replay.trace.iterates.len() - 1,
                status: replay.status,
                overall: cert.overall,
                failures: cert.failures().map(|e| e.name.clone()).collect(),
                iii_margin: cert.get("iii").map_or(f64::NAN, |e| e.margin),
                min_margin,
            });
        }
    }
    Ok(rows)
}

pub fn bench_csv(rows: &[BenchRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["seed", "family", "horizon", "delta0", "steps", "status", "overall", "failures", "iii_margin", "min_margin"])?;
    for r in rows {
        w.write_record([
            r.seed.to_string(),
            r.family.to_string(),
            r.horizon.to_string(),
            r.delta0.to_string(),
            r.steps.to_string(),
            r.status.to_string(),
            r.overall.to_string(),
            r.failures.join(";"),
            r.iii_margin.to_string(),
            r.min_margin.to_string(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    sorted[((sorted.len() - 1) as f64 * q).round() as usize]
}

pub fn cmd_bench(a: &BenchArgs, out: &mut dyn Write) -> Result<i32> {
    let rows = bench_rows(a)?;
    writeln!(out, "{:<6} {:>5} {:>6}   iii margin min / median / max", "family", "runs", "passed")?;
    for family in BENCH_FAMILIES {
        let sel: Vec<&BenchRow> = rows.iter().filter(|r| r.family == family).collect();
        let passed = sel.iter().filter(|r| r.overall).count();
        let mut m: Vec<f64> = sel.iter().map(|r| r.iii_margin).filter(|v| !v.is_nan()).collect();
        m.sort_by(f64::total_cmp);
        writeln!(
            out,
            "{family:<6} {:>5} {passed:>6}   {} / {} / {}",
            sel.len(),
            quantile(&m, 0.0),
            quantile(&m, 0.5),
            quantile(&m, 1.0)
        )?;
    }
    let fixtures = rows.iter().map(|r| r.seed).collect::<std::collections::BTreeSet<_>>().len();
    let all_pass = rows.iter().all(|r| r.overall);
    writeln!(out, "certificates {}/{} pass over {fixtures} fixtures", rows.iter().filter(|r| r.overall).count(), rows.len())?;
    if let Some(path) = &a.out_csv {
        std::fs::write(path, bench_csv(&rows)?)?;
    }
    Ok(if all_pass { EXIT_OK } else { EXIT_FAIL })
}

#[cfg(test)]
mod tests;
