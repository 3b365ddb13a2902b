//! Desk-scale complete metric spaces and gauge-type functions on them.
//!
//! Points are identified by `usize` ids in both space kinds: row indices
//! for finite spaces, linearized grid indices (axis 0 fastest) for box
//! grids.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ext::ExtReal;

pub type Point = usize;

/// Finite spaces up to this size get exhaustive axiom checks.
pub const EXHAUSTIVE_LIMIT: usize = 200;

/// Slack allowed when checking the triangle inequality on stored distances
/// and on gauges that claim it.
pub const TRIANGLE_SLACK: f64 = 1e-12;

/// The ε values at which a gauge modulus is exercised.
pub const MODULUS_LADDER: [f64; 9] = [1e-3, 1e-2, 0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 10.0];

#[derive(Clone, Debug, PartialEq)]
pub struct FiniteSpace {
    n: usize,
    dist: Vec<f64>,
}

impl FiniteSpace {
    /// Validates and wraps an `n × n` distance matrix.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidSpace("space has no points".into()));
        }
        let mut dist = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidSpace(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            dist.extend_from_slice(row);
        }
        let space = FiniteSpace { n, dist };
        space.check_metric()?;
        Ok(space)
    }

    fn check_metric(&self) -> Result<()> {
        let n = self.n;
        for x in 0..n {
            if self.d(x, x) != 0.0 {
                return Err(Error::InvalidSpace(format!("d({x},{x}) = {} != 0", self.d(x, x))));
            }
            for y in 0..n {
                let v = self.d(x, y);
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidSpace(format!("d({x},{y}) = {v} is not a finite nonnegative real")));
                }
                if v != self.d(y, x) {
                    return Err(Error::InvalidSpace(format!("d({x},{y}) != d({y},{x})")));
                }
                if x != y && v == 0.0 {
                    return Err(Error::InvalidSpace(format!("distinct points {x} and {y} at distance 0")));
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if self.d(x, z) > self.d(x, y) + self.d(y, z) + TRIANGLE_SLACK {
                        return Err(Error::InvalidSpace(format!(
                            "triangle inequality fails on ({x},{y},{z})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    #[inline]
    fn d(&self, x: Point, y: Point) -> f64 {
        self.dist[x * self.n + y]
    }

    pub fn matrix(&self) -> Vec<Vec<f64>> {
        self.dist.chunks(self.n).map(|r| r.to_vec()).collect()
    }
}

/// A hyper-rectangle sampled on a regular grid with the Euclidean metric.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxGrid {
    lower: Vec<f64>,
    upper: Vec<f64>,
    step: Vec<f64>,
    counts: Vec<usize>,
}

impl BoxGrid {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>, step: Vec<f64>) -> Result<Self> {
        let k = lower.len();
        if k == 0 || upper.len() != k || step.len() != k {
            return Err(Error::InvalidSpace("grid axes must agree and be nonempty".into()));
        }
        let mut counts = Vec::with_capacity(k);
        let mut eff_upper = Vec::with_capacity(k);
        for a in 0..k {
            let (lo, hi, h) = (lower[a], upper[a], step[a]);
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::InvalidSpace(format!("axis {a}: bad bounds [{lo}, {hi}]")));
            }
            if !(h.is_finite() && h > 0.0) {
                return Err(Error::InvalidSpace(format!("axis {a}: step must be positive")));
            }
            let steps = ((hi - lo) / h + 1e-9).floor() as usize;
            counts.push(steps + 1);
            // snap the last point onto `upper` when the step divides the span
            let last = lo + steps as f64 * h;
            eff_upper.push(if (last - hi).abs() <= 1e-9 * (hi - lo).max(1.0) { hi } else { last });
        }
        let total = counts.iter().try_fold(1usize, |acc, &c| acc.checked_mul(c));
        if total.is_none() {
            return Err(Error::InvalidSpace("grid is too large".into()));
        }
        Ok(BoxGrid { lower, upper: eff_upper, step, counts })
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn step(&self) -> &[f64] {
        &self.step
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn axis_coord(&self, a: usize, k: usize) -> f64 {
        let c = self.counts[a];
        if c == 1 {
            self.lower[a]
        } else {
            self.lower[a] + (self.upper[a] - self.lower[a]) * k as f64 / (c - 1) as f64
        }
    }

    pub fn indices(&self, p: Point) -> Vec<usize> {
        let mut rest = p;
        self.counts
            .iter()
            .map(|&c| {
                let k = rest % c;
                rest /= c;
                k
            })
            .collect()
    }

    pub fn point_at(&self, idx: &[usize]) -> Point {
        let mut p = 0;
        let mut stride = 1;
        for (a, &k) in idx.iter().enumerate() {
            p += k * stride;
            stride *= self.counts[a];
        }
        p
    }

    pub fn coords(&self, p: Point) -> Vec<f64> {
        self.indices(p)
            .into_iter()
            .enumerate()
            .map(|(a, k)| self.axis_coord(a, k))
            .collect()
    }

    /// The grid point closest to `x` (coordinates are clamped into the box).
    pub fn nearest(&self, x: &[f64]) -> Point {
        let idx: Vec<usize> = (0..self.dim())
            .map(|a| {
                let c = self.counts[a];
                if c == 1 {
                    return 0;
                }
                let h = (self.upper[a] - self.lower[a]) / (c - 1) as f64;
                let k = ((x[a] - self.lower[a]) / h).round();
                k.clamp(0.0, (c - 1) as f64) as usize
            })
            .collect();
        self.point_at(&idx)
    }

    /// Grid neighbor of `p` one step along `axis` in direction `dir` (±1).
    pub fn neighbor(&self, p: Point, axis: usize, dir: isize) -> Option<Point> {
        let mut idx = self.indices(p);
        let k = idx[axis] as isize + dir;
        if k < 0 || k >= self.counts[axis] as isize {
            return None;
        }
        idx[axis] = k as usize;
        Some(self.point_at(&idx))
    }

    fn d(&self, x: Point, y: Point) -> f64 {
        if x == y {
            return 0.0;
        }
        let (cx, cy) = (self.coords(x), self.coords(y));
        cx.iter().zip(&cy).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum MetricSpace {
    Finite(FiniteSpace),
    Grid(BoxGrid),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpaceKind {
    Finite,
    BoxGrid,
}

impl MetricSpace {
    pub fn finite(rows: Vec<Vec<f64>>) -> Result<Self> {
        FiniteSpace::new(rows).map(MetricSpace::Finite)
    }

    pub fn box_grid(lower: Vec<f64>, upper: Vec<f64>, step: Vec<f64>) -> Result<Self> {
        BoxGrid::new(lower, upper, step).map(MetricSpace::Grid)
    }

    /// Finite space on the real line with the metric `|a - b|`.
    pub fn on_line(positions: &[f64]) -> Result<Self> {
        let rows = positions
            .iter()
            .map(|a| positions.iter().map(|b| (a - b).abs()).collect())
            .collect();
        Self::finite(rows)
    }

    pub fn kind(&self) -> SpaceKind {
        match self {
            MetricSpace::Finite(_) => SpaceKind::Finite,
            MetricSpace::Grid(_) => SpaceKind::BoxGrid,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            MetricSpace::Finite(s) => s.n,
            MetricSpace::Grid(g) => g.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn points(&self) -> std::ops::Range<Point> {
        0..self.len()
    }

    pub fn contains(&self, p: Point) -> bool {
        p < self.len()
    }

    pub fn distance(&self, x: Point, y: Point) -> f64 {
        match self {
            MetricSpace::Finite(s) => s.d(x, y),
            MetricSpace::Grid(g) => g.d(x, y),
        }
    }

    pub fn diameter(&self) -> f64 {
        match self {
            MetricSpace::Finite(s) => s.dist.iter().copied().fold(0.0, f64::max),
            MetricSpace::Grid(g) => g
                .lower
                .iter()
                .zip(&g.upper)
                .map(|(lo, hi)| (hi - lo) * (hi - lo))
                .sum::<f64>()
                .sqrt(),
        }
    }

    pub fn as_grid(&self) -> Option<&BoxGrid> {
        match self {
            MetricSpace::Grid(g) => Some(g),
            MetricSpace::Finite(_) => None,
        }
    }

    /// Human-readable point label: `p3` or the grid coordinates.
    pub fn label(&self, p: Point) -> String {
        match self {
            MetricSpace::Finite(_) => format!("p{p}"),
            MetricSpace::Grid(g) => {
                let c: Vec<String> = g.coords(p).iter().map(|v| format!("{v}")).collect();
                format!("({})", c.join(","))
            }
        }
    }

    /// Parses the finite-space text format: a line with `n`, then `n` lines
    /// of `n` whitespace-separated distances.
    pub fn parse_finite(text: &str, origin: &str) -> Result<Self> {
        let mut lines = DataLines::new(text, origin);
        let space = lines.space()?;
        lines.expect_end()?;
        Ok(space)
    }

    pub fn read_finite(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse_finite(&text, &path.display().to_string())
    }
}

/// Line cursor over the whitespace-separated text formats; skips blank
/// lines and `#` comments.
pub(crate) struct DataLines<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
    origin: String,
}

impl<'a> DataLines<'a> {
    pub(crate) fn new(text: &'a str, origin: &str) -> Self {
        let lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        DataLines { lines, pos: 0, origin: origin.to_string() }
    }

    pub(crate) fn err(&self, line: usize, msg: impl Into<String>) -> Error {
        Error::Parse { path: self.origin.clone(), line, msg: msg.into() }
    }

    pub(crate) fn next_line(&mut self, what: &str) -> Result<(usize, Vec<&'a str>)> {
        let last = self.lines.last().map_or(0, |l| l.0);
        let (no, line) = *self
            .lines
            .get(self.pos)
            .ok_or_else(|| self.err(last + 1, format!("unexpected end of input, expected {what}")))?;
        self.pos += 1;
        Ok((no, line.split_whitespace().collect()))
    }

    pub(crate) fn single<T: std::str::FromStr>(&mut self, what: &str) -> Result<T> {
        let (no, toks) = self.next_line(what)?;
        if toks.len() != 1 {
            return Err(self.err(no, format!("expected a single {what}")));
        }
        toks[0].parse().map_err(|_| self.err(no, format!("cannot parse {what} from {:?}", toks[0])))
    }

    pub(crate) fn row<T: std::str::FromStr>(&mut self, n: usize, what: &str) -> Result<Vec<T>> {
        let (no, toks) = self.next_line(what)?;
        if toks.len() != n {
            return Err(self.err(no, format!("expected {n} values for {what}, found {}", toks.len())));
        }
        toks.iter()
            .map(|t| t.parse().map_err(|_| self.err(no, format!("cannot parse {what} entry {t:?}"))))
            .collect()
    }

    pub(crate) fn space(&mut self) -> Result<MetricSpace> {
        let n: usize = self.single("point count")?;
        if n == 0 {
            return Err(self.err(1, "space has no points"));
        }
        let rows = (0..n).map(|_| self.row::<f64>(n, "distance row")).collect::<Result<Vec<_>>>()?;
        MetricSpace::finite(rows)
    }

    pub(crate) fn expect_end(&self) -> Result<()> {
        match self.lines.get(self.pos) {
            Some((no, _)) => Err(self.err(*no, "trailing data")),
            None => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GaugeKind {
    /// `ρ = d`.
    Metric,
    /// `ρ = d^p`.
    Power(f64),
    Custom,
}

type EvalFn = dyn Fn(&MetricSpace, Point, Point) -> f64 + Send + Sync;
type ModulusFn = dyn Fn(f64) -> f64 + Send + Sync;

/// A gauge-type function `ρ : X × X → [0, ∞]` together with an explicit
/// modulus witness: `ρ(y, z) ≤ modulus(ε)` must imply `d(y, z) < ε`.
#[derive(Clone)]
pub struct GaugeFunction {
    kind: GaugeKind,
    eval: Arc<EvalFn>,
    modulus: Arc<ModulusFn>,
    has_triangle: bool,
    description: String,
}

impl fmt::Debug for GaugeFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GaugeFunction")
            .field("kind", &self.kind)
            .field("has_triangle", &self.has_triangle)
            .field("description", &self.description)
            .finish()
    }
}

impl GaugeFunction {
    pub fn custom(
        description: impl Into<String>,
        eval: impl Fn(&MetricSpace, Point, Point) -> f64 + Send + Sync + 'static,
        modulus: impl Fn(f64) -> f64 + Send + Sync + 'static,
        has_triangle: bool,
    ) -> Self {
        GaugeFunction {
            kind: GaugeKind::Custom,
            eval: Arc::new(eval),
            modulus: Arc::new(modulus),
            has_triangle,
            description: description.into(),
        }
    }

    /// Evaluates `ρ(x, y)` without trusting the result.
    pub fn try_eval(&self, space: &MetricSpace, x: Point, y: Point) -> Result<ExtReal> {
        let v = (self.eval)(space, x, y);
        ExtReal::new(v)
            .filter(|v| v.value() >= 0.0)
            .ok_or(Error::MalformedGauge { x, y, value: v })
    }

    /// Evaluates `ρ(x, y)`.
    ///
    /// Panics if the gauge produces a negative or NaN value; screen custom
    /// gauges with [`check_gauge_axioms`] first.
    pub fn eval(&self, space: &MetricSpace, x: Point, y: Point) -> ExtReal {
        match self.try_eval(space, x, y) {
            Ok(v) => v,
            Err(e) => panic!("{e}"),
        }
    }

    pub fn modulus(&self, eps: f64) -> f64 {
        (self.modulus)(eps)
    }

    pub fn has_triangle(&self) -> bool {
        self.has_triangle
    }

    pub fn kind(&self) -> GaugeKind {
        self.kind
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    /// Overrides the triangle-inequality flag. Setting it on a gauge that
    /// lacks the property is exactly what [`check_gauge_axioms`] catches.
    pub fn with_triangle_flag(mut self, flag: bool) -> Self {
        self.has_triangle = flag;
        self
    }

    /// Smallest metric radius certified by the modulus for a gauge bound
    /// `rho_bound`, searched on a dyadic ladder below `ceiling`. Returns
    /// `None` when even `ceiling` is not certified.
    pub fn radius_for(&self, rho_bound: f64, ceiling: f64) -> Option<f64> {
        if !(ceiling > 0.0) || self.modulus(ceiling) < rho_bound {
            return None;
        }
        let mut r = ceiling;
        for _ in 0..200 {
            let half = r / 2.0;
            if half <= 0.0 || self.modulus(half) < rho_bound {
                break;
            }
            r = half;
        }
        Some(r)
    }
}

/// Buildable gauge descriptions, as named on the command line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GaugeSpec {
    Metric,
    Power(f64),
}

impl GaugeSpec {
    pub fn build(self) -> Result<GaugeFunction> {
        match self {
            GaugeSpec::Metric => Ok(metric_as_gauge()),
            GaugeSpec::Power(p) => power_norm_gauge(p),
        }
    }
}

impl fmt::Display for GaugeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GaugeSpec::Metric => f.write_str("metric"),
            GaugeSpec::Power(p) => write!(f, "power({p})"),
        }
    }
}

/// `ρ(x, y) = d(x, y)^p` for `p > 0`, with modulus `ε^p / 2`.
///
/// The triangle flag is set for `p ≤ 1` (`t ↦ t^p` is subadditive there).
pub fn power_norm_gauge(p: f64) -> Result<GaugeFunction> {
    if !(p.is_finite() && p > 0.0) {
        return Err(Error::InvalidParameter(format!("power gauge needs p > 0, got {p}")));
    }
    let eval = move |s: &MetricSpace, x: Point, y: Point| {
        let d = s.distance(x, y);
        if p == 1.0 {
            d
        } else if p == 2.0 {
            d * d
        } else {
            d.powf(p)
        }
    };
    Ok(GaugeFunction {
        kind: GaugeKind::Power(p),
        eval: Arc::new(eval),
        modulus: Arc::new(move |eps: f64| eps.powf(p) / 2.0),
        has_triangle: p <= 1.0,
        description: format!("d^{p}"),
    })
}

/// `ρ = d`, modulus `ε / 2`.
pub fn metric_as_gauge() -> GaugeFunction {
    GaugeFunction {
        kind: GaugeKind::Metric,
        eval: Arc::new(|s: &MetricSpace, x, y| s.distance(x, y)),
        modulus: Arc::new(|eps: f64| eps / 2.0),
        has_triangle: true,
        description: "d".to_string(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub passed: bool,
    pub checked: usize,
    pub counterexample: Option<Vec<Point>>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AxiomReport {
    pub exhaustive: bool,
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

const AXIOM_SEED: u64 = 0x6a09_e667_f3bc_c908;

/// Checks the gauge-type axioms: `ρ(x,x) = 0`, modulus consistency over
/// [`MODULUS_LADDER`], the triangle inequality when flagged, and (on box
/// grids) a sampled one-step continuity bound. Finite spaces with at most
/// [`EXHAUSTIVE_LIMIT`] points are checked exhaustively; otherwise
/// `sample_budget` seeded samples are drawn per axiom.
pub fn check_gauge_axioms(
    space: &MetricSpace,
    gauge: &GaugeFunction,
    sample_budget: usize,
) -> Result<AxiomReport> {
    if sample_budget == 0 {
        return Err(Error::InvalidParameter("sample_budget must be at least 1".into()));
    }
    if space.is_empty() {
        return Err(Error::InvalidSpace("space has no points".into()));
    }
    let n = space.len();
    let exhaustive = space.kind() == SpaceKind::Finite && n <= EXHAUSTIVE_LIMIT;
    let mut rng = ChaCha8Rng::seed_from_u64(AXIOM_SEED);

    let singles: Vec<Point> = if exhaustive || n <= sample_budget {
        space.points().collect()
    } else {
        (0..sample_budget).map(|_| rng.gen_range(0..n)).collect()
    };
    let pairs: Vec<(Point, Point)> = if exhaustive {
        space.points().flat_map(|x| space.points().map(move |y| (x, y))).collect()
    } else {
        (0..sample_budget).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect()
    };

    let mut checks = Vec::new();

    let mut identity = AxiomCheck::new("identity");
    for &x in &singles {
        identity.checked += 1;
        let v = gauge.try_eval(space, x, x)?;
        if v != ExtReal::ZERO {
            identity.fail(vec![x], format!("rho({x},{x}) = {v}"));
            break;
        }
    }
    checks.push(identity);

    let mut modulus = AxiomCheck::new("modulus");
    'outer: for &eps in &MODULUS_LADDER {
        let delta = gauge.modulus(eps);
        if !(delta > 0.0) {
            modulus.fail(vec![], format!("modulus({eps}) = {delta} is not positive"));
            break;
        }
        for &(y, z) in &pairs {
            modulus.checked += 1;
            let r = gauge.try_eval(space, y, z)?;
            if r.value() <= delta && !(space.distance(y, z) < eps) {
                modulus.fail(
                    vec![y, z],
                    format!("rho = {r} <= modulus({eps}) = {delta} but d = {}", space.distance(y, z)),
                );
                break 'outer;
            }
        }
    }
    checks.push(modulus);

    if gauge.has_triangle() {
        let mut tri = AxiomCheck::new("triangle");
        let test = |x1: Point, x2: Point, x3: Point, tri: &mut AxiomCheck| -> Result<bool> {
            tri.checked += 1;
            let lhs = gauge.try_eval(space, x1, x3)?;
            let rhs = gauge.try_eval(space, x1, x2)? + gauge.try_eval(space, x2, x3)?;
            if lhs.minus(rhs) > TRIANGLE_SLACK {
                tri.fail(
                    vec![x1, x2, x3],
                    format!("rho(x1,x3) = {lhs} > rho(x1,x2) + rho(x2,x3) = {rhs}"),
                );
                return Ok(false);
            }
            Ok(true)
        };
        if exhaustive {
            'tri: for x1 in 0..n {
                for x2 in 0..n {
                    for x3 in 0..n {
                        if !test(x1, x2, x3, &mut tri)? {
                            break 'tri;
                        }
                    }
                }
            }
        } else {
            for _ in 0..sample_budget {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if !test(a, b, c, &mut tri)? {
                    break;
                }
            }
        }
        checks.push(tri);
    }

    let mut cont = AxiomCheck::new("continuity");
    match space {
        MetricSpace::Finite(_) => cont.detail = "vacuous on a finite space (isolated points)".into(),
        MetricSpace::Grid(g) => {
            let mut max_ratio: f64 = 0.0;
            for &(y, z) in &pairs {
                let axis = rng.gen_range(0..g.dim());
                let dir = if rng.gen_bool(0.5) { 1 } else { -1 };
                let Some(y2) = g.neighbor(y, axis, dir).or_else(|| g.neighbor(y, axis, -dir)) else {
                    continue;
                };
                cont.checked += 1;
                let (a, b) = (gauge.try_eval(space, y, z)?, gauge.try_eval(space, y2, z)?);
                if a.is_finite() != b.is_finite() {
                    cont.fail(vec![y, y2, z], format!("one grid step moves rho from {a} to {b}"));
                    break;
                }
                if a.is_finite() {
                    max_ratio = max_ratio.max((b.value() - a.value()).abs() / space.distance(y, y2));
                }
            }
            if cont.passed {
                cont.detail = format!("max one-step ratio |drho|/d = {max_ratio}");
            }
        }
    }
    checks.push(cont);

    Ok(AxiomReport { exhaustive, checks })
}

impl AxiomCheck {
    fn new(name: &'static str) -> Self {
        AxiomCheck { name, passed: true, checked: 0, counterexample: None, detail: String::new() }
    }

    fn fail(&mut self, witness: Vec<Point>, detail: String) {
        self.passed = false;
        self.counterexample = Some(witness);
        self.detail = detail;
    }
}
