//! Named benchmark fixtures.

use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::spaces::{GaugeSpec, MetricSpace, SpaceKind};

use super::{random_problem, DeltaSeq, EpsRule, Horizon, Problem, RandomConfig, Schedule};
use super::{DEFAULT_CAP, DEFAULT_TOL_D};

pub(super) const RANDOM_MAX_POINTS: usize = 200;

/// Seeds of the random fixtures listed by [`corpus`]; any `RANDOM-<seed>`
/// name resolves through [`problem_by_name`].
const CORPUS_RANDOM_SEEDS: [u64; 4] = [0, 1, 2, 3];

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub problem: Problem,
    pub schedule: Schedule,
    pub gauge: GaugeSpec,
}

fn p3_space() -> MetricSpace {
    MetricSpace::finite(vec![vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 1.0], vec![2.0, 1.0, 0.0]])
        .expect("P3 is a metric")
}

fn finite_values(v: &[f64]) -> Vec<ExtReal> {
    v.iter().map(|&x| ExtReal::from(x)).collect()
}

fn p3(epsilon: f64) -> Problem {
    Problem::new("P3", p3_space(), finite_values(&[1.0, 0.2, 0.0]), 0, epsilon).expect("P3")
}

fn line_abs() -> Problem {
    let space = MetricSpace::box_grid(vec![-2.0], vec![2.0], vec![1e-3]).expect("grid");
    Problem::on_grid("LINE-ABS", space, |x| x[0].abs(), &[1.5], 2.0).expect("LINE-ABS")
}

fn plateau() -> Problem {
    let space = MetricSpace::on_line(&[0.0, 1.0, 2.0, 3.0, 4.0]).expect("line");
    Problem::new("PLATEAU", space, finite_values(&[2.0; 5]), 2, 0.5).expect("PLATEAU")
}

fn inf_at_gap() -> Problem {
    let space = MetricSpace::on_line(&[0.0, 0.5, 1.0, 5.0, 8.0, 9.0]).expect("line");
    let values = vec![
        ExtReal::finite(1.0),
        ExtReal::finite(0.75),
        ExtReal::finite(0.875),
        ExtReal::INFINITY,
        ExtReal::finite(0.25),
        ExtReal::finite(0.0),
    ];
    Problem::new("INF-AT-GAP", space, values, 0, 2.0).expect("INF-AT-GAP")
}

/// Resolves a problem by fixture name (`P3`, `EQUALITY-EDGE`, `LINE-ABS`,
/// `PLATEAU`, `INF-AT-GAP`, `RANDOM-<seed>`).
pub fn problem_by_name(name: &str) -> Result<Problem> {
    match name {
        "P3" => Ok(p3(2.0)),
        // f(x0) - inf f = 1 = eps exactly
        "EQUALITY-EDGE" => Ok(Problem { name: "EQUALITY-EDGE".into(), ..p3(1.0) }),
        "LINE-ABS" => Ok(line_abs()),
        "PLATEAU" => Ok(plateau()),
        "INF-AT-GAP" => Ok(inf_at_gap()),
        _ => {
            let seed = name
                .strip_prefix("RANDOM-")
                .and_then(|s| s.parse::<u64>().ok())
                .ok_or_else(|| Error::UnknownFixture(name.to_string()))?;
            Ok(random_problem(seed, &RandomConfig::default()))
        }
    }
}

fn schedule(problem: &Problem, delta: DeltaSeq) -> Schedule {
    let kind = problem.space.kind();
    let eps = EpsRule::Standard { epsilon: problem.epsilon, delta0: delta.get(0) };
    Schedule::new(delta, eps, DEFAULT_CAP, DEFAULT_TOL_D, super::default_tol_cert(kind)).expect("fixture schedule")
}

fn fixture(name: &str, problem: Problem, delta: DeltaSeq, gauge: GaugeSpec) -> Fixture {
    let schedule = schedule(&problem, delta);
    Fixture { name: name.to_string(), problem, schedule, gauge }
}

/// Looks up a fixture from [`corpus`] by name, falling back to
/// `RANDOM-<seed>` for arbitrary seeds. `LINE-ABS` selects the `p = 1` variant.
pub fn fixture_by_name(name: &str) -> Result<Fixture> {
    let key = if name == "LINE-ABS" { "LINE-ABS-P1" } else { name };
    if let Some(f) = corpus().into_iter().find(|f| f.name == key) {
        return Ok(f);
    }
    let problem = problem_by_name(name)?;
    Ok(random_fixture(problem))
}

fn random_fixture(problem: Problem) -> Fixture {
    let (inf, _) = problem.infimum();
    let delta0 = ((problem.f0() - inf.value()) / problem.epsilon).max(1.0 / 16.0);
    let name = problem.name.clone();
    fixture(&name, problem, DeltaSeq::new(vec![delta0], super::DeltaTail::Zero).expect("delta"), GaugeSpec::Metric)
}

/// All named fixtures with their default schedules and gauges.
pub fn corpus() -> Vec<Fixture> {
    let mut out = vec![
        fixture("P3", p3(2.0), DeltaSeq::geometric(0.5, 0.5, Horizon::Finite(1)).expect("delta"), GaugeSpec::Metric),
        fixture(
            "EQUALITY-EDGE",
            problem_by_name("EQUALITY-EDGE").expect("fixture"),
            DeltaSeq::geometric(1.0, 0.5, Horizon::Finite(1)).expect("delta"),
            GaugeSpec::Metric,
        ),
    ];
    for (tag, p) in [("0.5", 0.5), ("1", 1.0), ("2", 2.0)] {
        out.push(fixture(
            &format!("LINE-ABS-P{tag}"),
            line_abs(),
            DeltaSeq::geometric(1.0, 0.5, Horizon::Infinite).expect("delta"),
            GaugeSpec::Power(p),
        ));
    }
    out.push(fixture(
        "PLATEAU",
        plateau(),
        DeltaSeq::geometric(1.0, 0.5, Horizon::Finite(3)).expect("delta"),
        GaugeSpec::Metric,
    ));
    out.push(fixture(
        "INF-AT-GAP",
        inf_at_gap(),
        DeltaSeq::geometric(0.5, 0.5, Horizon::Infinite).expect("delta"),
        GaugeSpec::Metric,
    ));
    for seed in CORPUS_RANDOM_SEEDS {
        out.push(random_fixture(random_problem(seed, &RandomConfig::default())));
    }
    debug_assert!(out.iter().all(|f| f.problem.space.kind() != SpaceKind::Finite
        || f.problem.space.len() <= RANDOM_MAX_POINTS));
    out
}
