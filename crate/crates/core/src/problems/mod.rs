//! Problem records, parameter schedules and hypothesis validation.

mod corpus;
mod random;

pub use corpus::{corpus, fixture_by_name, problem_by_name, Fixture};
pub use random::{random_metric_space, random_problem, RandomConfig};

use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::spaces::{DataLines, GaugeFunction, MetricSpace, Point, SpaceKind};

/// Hypothesis data: a space, an extended-real objective given by its value
/// at every point, a starting point `x0` and the accuracy `ε`.
#[derive(Clone, Debug, PartialEq)]
pub struct Problem {
    pub name: String,
    pub space: MetricSpace,
    values: Vec<ExtReal>,
    pub x0: Point,
    pub epsilon: f64,
}

impl Problem {
    pub fn new(
        name: impl Into<String>,
        space: MetricSpace,
        values: Vec<ExtReal>,
        x0: Point,
        epsilon: f64,
    ) -> Result<Self> {
        if space.is_empty() {
            return Err(Error::InvalidProblem("empty space".into()));
        }
        if values.len() != space.len() {
            return Err(Error::InvalidProblem(format!(
                "{} objective values for {} points",
                values.len(),
                space.len()
            )));
        }
        if !space.contains(x0) {
            return Err(Error::InvalidProblem(format!("x0 = {x0} is not a point of the space")));
        }
        if !values[x0].is_finite() {
            return Err(Error::InvalidProblem("f(x0) must be finite".into()));
        }
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::InvalidProblem(format!("epsilon must be positive, got {epsilon}")));
        }
        Ok(Problem { name: name.into(), space, values, x0, epsilon })
    }

    /// Samples `f` at every grid point; `x0` is the grid point nearest to
    /// the given coordinates.
    pub fn on_grid(
        name: impl Into<String>,
        space: MetricSpace,
        f: impl Fn(&[f64]) -> f64,
        x0: &[f64],
        epsilon: f64,
    ) -> Result<Self> {
        let grid = space
            .as_grid()
            .ok_or_else(|| Error::InvalidProblem("on_grid needs a box-grid space".into()))?;
        let values = space
            .points()
            .map(|p| {
                let v = f(&grid.coords(p));
                ExtReal::new(v).ok_or_else(|| Error::InvalidProblem(format!("f = {v} at grid point {p}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let x0 = grid.nearest(x0);
        Self::new(name, space, values, x0, epsilon)
    }

    pub fn f(&self, x: Point) -> ExtReal {
        self.values[x]
    }

    pub fn values(&self) -> &[ExtReal] {
        &self.values
    }

    /// `f(x0)`, finite by construction.
    pub fn f0(&self) -> f64 {
        self.values[self.x0].value()
    }

    /// `(inf f, lowest-index minimizer)` by enumeration.
    pub fn infimum(&self) -> (ExtReal, Point) {
        let mut best = (self.values[0], 0);
        for (p, &v) in self.values.iter().enumerate().skip(1) {
            if v < best.0 {
                best = (v, p);
            }
        }
        best
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::InvalidProblem(format!("epsilon must be positive, got {epsilon}")));
        }
        self.epsilon = epsilon;
        Ok(self)
    }

    pub fn with_x0(self, x0: Point) -> Result<Self> {
        Self::new(self.name, self.space, self.values, x0, self.epsilon)
    }

    /// Parses a problem file: the finite-space block, then one line of `n`
    /// objective values (`inf` allowed), one line with the `x0` index and
    /// one line with `ε`.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut lines = DataLines::new(text, origin);
        let space = lines.space()?;
        let values: Vec<ExtReal> = lines.row(space.len(), "objective value")?;
        let x0: usize = lines.single("x0 index")?;
        let epsilon: f64 = lines.single("epsilon")?;
        lines.expect_end()?;
        let name = Path::new(origin)
            .file_stem()
            .map_or_else(|| origin.to_string(), |s| s.to_string_lossy().into_owned());
        Self::new(name, space, values, x0, epsilon)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Renders a finite problem in the file format accepted by [`Problem::parse`].
    pub fn to_file_string(&self) -> Result<String> {
        let MetricSpace::Finite(fs) = &self.space else {
            return Err(Error::InvalidProblem("only finite problems have a file form".into()));
        };
        let mut out = format!("{}\n", self.space.len());
        for row in fs.matrix() {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        let vals: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        out.push_str(&vals.join(" "));
        out.push('\n');
        out.push_str(&format!("{}\n{}\n", self.x0, self.epsilon));
        Ok(out)
    }
}

/// Index cutoff `N ∈ ℕ ∪ {∞}`: weights are positive below it and zero from it on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Horizon {
    Finite(usize),
    Infinite,
}

impl Horizon {
    pub fn is_finite(self) -> bool {
        matches!(self, Horizon::Finite(_))
    }

    /// `j_i = min{i, N - 1}`.
    pub fn j(self, i: usize) -> usize {
        match self {
            Horizon::Finite(n) => i.min(n - 1),
            Horizon::Infinite => i,
        }
    }
}

impl fmt::Display for Horizon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Horizon::Finite(n) => write!(f, "{n}"),
            Horizon::Infinite => f.write_str("inf"),
        }
    }
}

/// How the weights continue after the listed head.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DeltaTail {
    /// All later weights vanish; `N` is the head length.
    Zero,
    /// `δ_i = δ_{L-1} r^{i-L+1}` for `i ≥ L`.
    Geometric(f64),
    /// `δ_i = δ_{L-1} L / (i + 1)` for `i ≥ L`; the series diverges.
    Harmonic,
}

/// The weight sequence `{δ_i}`, evaluated lazily.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaSeq {
    head: Vec<f64>,
    tail: DeltaTail,
}

impl DeltaSeq {
    pub fn new(head: Vec<f64>, tail: DeltaTail) -> Result<Self> {
        if head.is_empty() {
            return Err(Error::InvalidSchedule("delta list must contain delta_0".into()));
        }
        if let Some(bad) = head.iter().find(|d| !(d.is_finite() && **d > 0.0)) {
            return Err(Error::InvalidSchedule(format!("listed weights must be positive, found {bad}")));
        }
        if let DeltaTail::Geometric(r) = tail {
            if !(r.is_finite() && r > 0.0) {
                return Err(Error::InvalidSchedule(format!("geometric ratio must be positive, got {r}")));
            }
        }
        Ok(DeltaSeq { head, tail })
    }

    /// `δ_i = δ_0 r^i` for `i < N`.
    pub fn geometric(delta0: f64, ratio: f64, horizon: Horizon) -> Result<Self> {
        match horizon {
            Horizon::Finite(n) => {
                if n == 0 {
                    return Err(Error::InvalidSchedule("N must be at least 1".into()));
                }
                Self::new((0..n).map(|i| delta0 * ratio.powi(i as i32)).collect(), DeltaTail::Zero)
            }
            Horizon::Infinite => Self::new(vec![delta0], DeltaTail::Geometric(ratio)),
        }
    }

    /// `δ_i = δ_0 / (i + 1)` for `i < N`.
    pub fn harmonic(delta0: f64, horizon: Horizon) -> Result<Self> {
        match horizon {
            Horizon::Finite(n) => {
                if n == 0 {
                    return Err(Error::InvalidSchedule("N must be at least 1".into()));
                }
                Self::new((0..n).map(|i| delta0 / (i + 1) as f64).collect(), DeltaTail::Zero)
            }
            Horizon::Infinite => Self::new(vec![delta0], DeltaTail::Harmonic),
        }
    }

    pub fn get(&self, i: usize) -> f64 {
        if let Some(&d) = self.head.get(i) {
            return d;
        }
        let len = self.head.len();
        let last = self.head[len - 1];
        match self.tail {
            DeltaTail::Zero => 0.0,
            DeltaTail::Geometric(r) => last * r.powi((i - len + 1) as i32),
            DeltaTail::Harmonic => last * len as f64 / (i + 1) as f64,
        }
    }

    pub fn horizon(&self) -> Horizon {
        match self.tail {
            DeltaTail::Zero => Horizon::Finite(self.head.len()),
            _ => Horizon::Infinite,
        }
    }

    pub fn head(&self) -> &[f64] {
        &self.head
    }

    pub fn tail(&self) -> DeltaTail {
        self.tail
    }

    /// `Σ_{i > t} δ_i`, possibly `+∞`.
    pub fn tail_sum(&self, t: usize) -> f64 {
        let len = self.head.len();
        let listed: f64 = self.head.iter().skip(t + 1).sum();
        let start = len.max(t + 1);
        let rest = match self.tail {
            DeltaTail::Zero => 0.0,
            DeltaTail::Harmonic => f64::INFINITY,
            DeltaTail::Geometric(r) if r >= 1.0 => f64::INFINITY,
            DeltaTail::Geometric(r) => self.get(start) / (1.0 - r),
        };
        listed + rest
    }

    /// Multiplies every weight by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.head.iter().map(|d| d * c).collect(), self.tail)
    }
}

/// The selection-slack sequence `{ε_i}_{i ≥ 1}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EpsRule {
    /// `ε_i = ε / (2^i δ_0)`.
    Standard { epsilon: f64, delta0: f64 },
    /// `ε_i = first · ratio^{i-1}`.
    Geometric { first: f64, ratio: f64 },
}

impl EpsRule {
    pub fn get(&self, i: usize) -> f64 {
        debug_assert!(i >= 1, "eps sequence starts at index 1");
        match *self {
            EpsRule::Standard { epsilon, delta0 } => epsilon / (2f64.powi(i as i32) * delta0),
            EpsRule::Geometric { first, ratio } => first * ratio.powi(i as i32 - 1),
        }
    }

    /// The rule for `ε_i^p`.
    pub fn powf(&self, p: f64) -> EpsRule {
        match *self {
            EpsRule::Standard { epsilon, delta0 } => EpsRule::Geometric {
                first: (epsilon / (2.0 * delta0)).powf(p),
                ratio: 0.5f64.powf(p),
            },
            EpsRule::Geometric { first, ratio } => EpsRule::Geometric { first: first.powf(p), ratio: ratio.powf(p) },
        }
    }
}

/// `ε_i = ε / (2^i δ_0)` as an index-to-value function.
pub fn default_eps_schedule(epsilon: f64, delta0: f64) -> impl Fn(usize) -> f64 {
    let rule = EpsRule::Standard { epsilon, delta0 };
    move |i| rule.get(i)
}

/// Parameter sequences plus run limits and tolerances.
#[derive(Clone, Debug, PartialEq)]
pub struct Schedule {
    pub delta: DeltaSeq,
    pub eps: EpsRule,
    /// Iteration cap `K`.
    pub cap: usize,
    /// Target metric diameter for declaring convergence.
    pub tol_d: f64,
    /// Slack granted to certificate inequalities.
    pub tol_cert: f64,
}

pub const DEFAULT_CAP: usize = 40;
pub const DEFAULT_TOL_D: f64 = 1e-9;
pub const TOL_CERT_FINITE: f64 = 1e-9;
pub const TOL_CERT_GRID: f64 = 1e-6;

pub fn default_tol_cert(kind: SpaceKind) -> f64 {
    match kind {
        SpaceKind::Finite => TOL_CERT_FINITE,
        SpaceKind::BoxGrid => TOL_CERT_GRID,
    }
}

impl Schedule {
    pub fn new(delta: DeltaSeq, eps: EpsRule, cap: usize, tol_d: f64, tol_cert: f64) -> Result<Self> {
        let s = Schedule { delta, eps, cap, tol_d, tol_cert };
        s.check_shape()?;
        Ok(s)
    }

    /// Geometric weights with ratio 1/2 and the default slack sequence.
    pub fn standard(epsilon: f64, delta0: f64, horizon: Horizon, kind: SpaceKind) -> Result<Self> {
        Self::new(
            DeltaSeq::geometric(delta0, 0.5, horizon)?,
            EpsRule::Standard { epsilon, delta0 },
            DEFAULT_CAP,
            DEFAULT_TOL_D,
            default_tol_cert(kind),
        )
    }

    pub fn delta(&self, i: usize) -> f64 {
        self.delta.get(i)
    }

    pub fn delta0(&self) -> f64 {
        self.delta.get(0)
    }

    /// `ε_i` for `i ≥ 1`.
    pub fn eps(&self, i: usize) -> f64 {
        self.eps.get(i)
    }

    pub fn horizon(&self) -> Horizon {
        self.delta.horizon()
    }

    pub fn j(&self, i: usize) -> usize {
        self.horizon().j(i)
    }

    /// Checks the sequence invariants on the first `cap` indices.
    pub fn check_shape(&self) -> Result<()> {
        if self.cap == 0 {
            return Err(Error::InvalidSchedule("cap must be at least 1".into()));
        }
        if !(self.tol_d.is_finite() && self.tol_d > 0.0) {
            return Err(Error::InvalidSchedule("tol_d must be positive".into()));
        }
        if !(self.tol_cert.is_finite() && self.tol_cert >= 0.0) {
            return Err(Error::InvalidSchedule("tol_cert must be nonnegative".into()));
        }
        let horizon = self.horizon();
        for i in 0..=self.cap {
            let d = self.delta(i);
            let below = match horizon {
                Horizon::Finite(n) => i < n,
                Horizon::Infinite => true,
            };
            if below && !(d > 0.0 && d.is_finite()) {
                return Err(Error::InvalidSchedule(format!("delta_{i} = {d} must be positive below N")));
            }
            if !below && d != 0.0 {
                return Err(Error::InvalidSchedule(format!("delta_{i} = {d} must vanish from N on")));
            }
        }
        let mut prev = f64::INFINITY;
        for i in 1..=self.cap {
            let e = self.eps(i);
            if !(e > 0.0 && e.is_finite()) {
                return Err(Error::InvalidSchedule(format!("eps_{i} = {e} must be positive")));
            }
            if e > prev {
                return Err(Error::InvalidSchedule(format!("eps_{i} = {e} increases")));
            }
            prev = e;
        }
        if self.cap > 1 && !(self.eps(self.cap) < self.eps(1)) {
            return Err(Error::InvalidSchedule("eps sequence does not decrease".into()));
        }
        Ok(())
    }
}

/// Outcome of checking the ε-minimality hypotheses.
#[derive(Clone, Debug, PartialEq)]
pub struct HypothesisReport {
    /// `f(x0) ≤ inf f + ε`.
    pub eps_min_ok: bool,
    /// `δ_0 ≥ (f(x0) − inf f) / ε`.
    pub ies2_ok: bool,
    /// `f(x) ≥ f(x0) − ε` whenever `f(x) + δ_0 ρ(x, x0) > f(x0)`.
    pub weak_min_ok: bool,
    pub computed_inf: ExtReal,
    pub argmin: Point,
    pub eps_min_slack: f64,
    pub ies2_slack: f64,
    /// Smallest `f(x) − (f(x0) − ε)` over the points the weak form
    /// constrains; `+∞` when there are none.
    pub weak_min_slack: f64,
    pub weak_min_witness: Option<Point>,
}

/// Computes `inf f` by enumeration and evaluates the three hypothesis
/// forms. Fails on malformed schedules.
pub fn validate(problem: &Problem, gauge: &GaugeFunction, schedule: &Schedule) -> Result<HypothesisReport> {
    if problem.space.is_empty() {
        return Err(Error::InvalidProblem("empty space".into()));
    }
    if !problem.f(problem.x0).is_finite() {
        return Err(Error::InvalidProblem("f(x0) = +inf".into()));
    }
    schedule.check_shape()?;
    let (inf, argmin) = problem.infimum();
    let f0 = problem.f0();
    let eps = problem.epsilon;
    let delta0 = schedule.delta0();
    let gap = f0 - inf.value();

    let eps_min_slack = inf.value() + eps - f0;
    let ies2_slack = delta0 - gap / eps;

    let mut weak_min_slack = f64::INFINITY;
    let mut weak_min_witness = None;
    for x in problem.space.points() {
        let lhs = problem.f(x) + gauge.eval(&problem.space, x, problem.x0).scale(delta0);
        if lhs.value() > f0 {
            let s = problem.f(x).value() - (f0 - eps);
            if s < weak_min_slack {
                weak_min_slack = s;
                weak_min_witness = Some(x);
            }
        }
    }

    Ok(HypothesisReport {
        eps_min_ok: f0 <= inf.value() + eps,
        ies2_ok: delta0 >= gap / eps,
        weak_min_ok: weak_min_slack >= 0.0,
        computed_inf: inf,
        argmin,
        eps_min_slack,
        ies2_slack,
        weak_min_slack,
        weak_min_witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::metric_as_gauge;
    use proptest::prelude::*;

    fn p3(eps: f64) -> Problem {
        problem_by_name("P3").unwrap().with_epsilon(eps).unwrap()
    }

    fn sched(eps: f64, delta0: f64, n: Horizon) -> Schedule {
        Schedule::standard(eps, delta0, n, SpaceKind::Finite).unwrap()
    }

    #[test]
    fn p3_equality_case_is_eps_minimal() {
        let pr = p3(1.0);
        let r = validate(&pr, &metric_as_gauge(), &sched(1.0, 1.0, Horizon::Finite(1))).unwrap();
        assert_eq!(r.computed_inf, ExtReal::finite(0.0));
        assert_eq!(r.argmin, 2);
        assert!(r.eps_min_ok);
        assert_eq!(r.eps_min_slack, 0.0);
        assert!(r.ies2_ok);
        assert_eq!(r.ies2_slack, 0.0);
        let r = validate(&pr, &metric_as_gauge(), &sched(1.0, 0.99, Horizon::Finite(1))).unwrap();
        assert!(r.eps_min_ok);
        assert!(!r.ies2_ok);
    }

    #[test]
    fn p3_ies2_with_larger_eps() {
        let pr = p3(2.0);
        let r = validate(&pr, &metric_as_gauge(), &sched(2.0, 0.5, Horizon::Finite(1))).unwrap();
        assert!(r.ies2_ok && r.eps_min_ok && r.weak_min_ok);
    }

    #[test]
    fn global_minimizer_start_passes_everything() {
        let pr = p3(0.3).with_x0(2).unwrap();
        let r = validate(&pr, &metric_as_gauge(), &sched(0.3, 1.0, Horizon::Infinite)).unwrap();
        assert!(r.eps_min_ok && r.ies2_ok && r.weak_min_ok);
    }

    #[test]
    fn weak_form_is_weaker() {
        let sp = MetricSpace::on_line(&[0.0, 0.1, 10.0]).unwrap();
        let pr = Problem::new("w", sp, vec![1.0.into(), 0.7.into(), 0.0.into()], 0, 0.5).unwrap();
        let r = validate(&pr, &metric_as_gauge(), &sched(0.5, 1.0, Horizon::Finite(1))).unwrap();
        assert!(!r.eps_min_ok);
        // x2 has f = 0 < f(x0) - eps and sits outside S_0
        assert!(!r.weak_min_ok);
        assert_eq!(r.weak_min_witness, Some(2));
        // a tiny delta0 puts every point in S_0, so nothing is constrained
        let r = validate(&pr, &metric_as_gauge(), &sched(0.5, 0.001, Horizon::Finite(1))).unwrap();
        assert!(!r.eps_min_ok);
        assert!(r.weak_min_ok);
        assert!(r.weak_min_slack.is_infinite());
    }

    #[test]
    fn infinite_f0_is_rejected() {
        let sp = MetricSpace::on_line(&[0.0, 1.0]).unwrap();
        assert!(Problem::new("x", sp, vec![ExtReal::INFINITY, 0.0.into()], 0, 1.0).is_err());
    }

    #[test]
    fn default_eps_examples() {
        let e = default_eps_schedule(1.0, 1.0);
        assert_eq!(e(1), 0.5);
        assert_eq!(e(2), 0.25);
        assert_eq!(default_eps_schedule(2.0, 0.5)(1), 2.0);
        assert_eq!(default_eps_schedule(1.0, 4.0)(3), 1.0 / 32.0);
    }

    #[test]
    fn delta_sequences() {
        let d = DeltaSeq::geometric(0.5, 0.5, Horizon::Infinite).unwrap();
        assert_eq!(d.get(0), 0.5);
        assert_eq!(d.get(3), 0.0625);
        assert_eq!(d.tail_sum(0), 0.5);
        assert_eq!(d.tail_sum(2), 0.125);
        let d = DeltaSeq::geometric(1.0, 0.5, Horizon::Finite(3)).unwrap();
        assert_eq!(d.horizon(), Horizon::Finite(3));
        assert_eq!(d.get(2), 0.25);
        assert_eq!(d.get(3), 0.0);
        assert_eq!(d.tail_sum(0), 0.75);
        assert_eq!(d.tail_sum(5), 0.0);
        let h = DeltaSeq::harmonic(1.0, Horizon::Infinite).unwrap();
        assert_eq!(h.get(3), 0.25);
        assert!(h.tail_sum(10).is_infinite());
        let c = DeltaSeq::new(vec![1.0], DeltaTail::Geometric(1.0)).unwrap();
        assert!(c.tail_sum(0).is_infinite());
        assert!(DeltaSeq::new(vec![], DeltaTail::Zero).is_err());
        assert!(DeltaSeq::new(vec![1.0, 0.0], DeltaTail::Zero).is_err());
    }

    #[test]
    fn j_index_rule() {
        assert_eq!(Horizon::Finite(1).j(5), 0);
        assert_eq!(Horizon::Finite(3).j(1), 1);
        assert_eq!(Horizon::Finite(3).j(7), 2);
        assert_eq!(Horizon::Infinite.j(7), 7);
    }

    #[test]
    fn schedule_shape_checks() {
        let bad = Schedule::new(
            DeltaSeq::geometric(1.0, 0.5, Horizon::Infinite).unwrap(),
            EpsRule::Geometric { first: 1.0, ratio: 1.0 },
            10,
            1e-9,
            1e-9,
        );
        assert!(matches!(bad, Err(Error::InvalidSchedule(_))));
        let bad = Schedule::new(
            DeltaSeq::geometric(1.0, 0.5, Horizon::Infinite).unwrap(),
            EpsRule::Standard { epsilon: 1.0, delta0: 1.0 },
            0,
            1e-9,
            1e-9,
        );
        assert!(bad.is_err());
    }

    #[test]
    fn eps_power_rule_matches_pointwise_power() {
        let base = EpsRule::Standard { epsilon: 0.5, delta0: 0.6 };
        let pw = base.powf(2.0);
        for i in 1..20 {
            let a = base.get(i).powf(2.0);
            assert!((pw.get(i) - a).abs() <= 1e-14 * a);
        }
    }

    #[test]
    fn problem_file_round_trip() {
        let text = "3\n0 1 2\n1 0 1\n2 1 0\n1.0 inf 0.0\n0\n2\n";
        let pr = Problem::parse(text, "mem.txt").unwrap();
        assert_eq!(pr.name, "mem");
        assert!(pr.f(1).is_infinite());
        assert_eq!(pr.epsilon, 2.0);
        let again = Problem::parse(&pr.to_file_string().unwrap(), "mem.txt").unwrap();
        assert_eq!(again, pr);
        assert!(Problem::parse("3\n0 1 2\n1 0 1\n2 1 0\n1.0 inf\n0\n2\n", "m").is_err());
        assert!(Problem::parse("3\n0 1 2\n1 0 1\n2 1 0\n1.0 inf 0\n7\n2\n", "m").is_err());
    }

    proptest! {
        #[test]
        fn default_eps_halves(eps in 1e-3f64..10.0, d0 in 1e-3f64..10.0) {
            let e = default_eps_schedule(eps, d0);
            for i in 1..30 {
                prop_assert!(e(i + 1) < e(i));
                prop_assert_eq!(e(i + 1) * 2.0, e(i));
            }
        }

        #[test]
        fn validate_is_pure_and_inf_is_brute_force(seed in 0u64..500) {
            let pr = random_problem(seed, &RandomConfig::default());
            let g = metric_as_gauge();
            let s = sched(pr.epsilon, 1.0, Horizon::Finite(1));
            let a = validate(&pr, &g, &s).unwrap();
            let b = validate(&pr, &g, &s).unwrap();
            prop_assert_eq!(&a, &b);
            let brute = pr.values().iter().copied().min().unwrap();
            prop_assert_eq!(a.computed_inf, brute);
            prop_assert!(!a.eps_min_ok || a.weak_min_ok);
        }
    }
}
