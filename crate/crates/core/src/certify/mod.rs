//! Independent re-verification of a run.
//!
//! Nothing here calls the solver. The sets `S_i` are rebuilt from the
//! recorded iterates and the problem data, every recorded column is
//! compared against its recomputed value, and each conclusion is
//! evaluated with its margin (right side minus left side; negative means
//! violated).

mod checks;
mod corollaries;

pub use checks::main_theorem_entries;
pub use corollaries::{
    c4_entries, c6_entries, check_ekeland, check_t4, implication_counts, su10_plus_entry,
    t4_derivative_probe, ImplicationCounts, T4Params, DerivativeProbe, FD_STEPS, FD_TOL,
};

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ext::{deserialize_f64, serialize_f64, ExtReal};
use crate::problems::{Horizon, Problem, Schedule};
use crate::slope;
use crate::solver::RunResult;
use crate::spaces::{GaugeFunction, Point};

/// Witness lists are cut off at this length.
pub const MAX_WITNESSES: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntryStatus {
    Pass,
    Fail,
    Skipped,
}

/// One checked statement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub name: String,
    pub holds: bool,
    pub status: EntryStatus,
    /// Smallest slack over everything the entry quantifies over.
    /// NaN for skipped entries.
    #[serde(serialize_with = "serialize_f64", deserialize_with = "deserialize_f64")]
    pub margin: f64,
    /// Failing items, or the tightest item when nothing fails.
    pub witnesses: Vec<usize>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
}

impl Entry {
    pub fn skipped(name: &str, note: impl Into<String>) -> Self {
        Entry {
            name: name.to_string(),
            holds: true,
            status: EntryStatus::Skipped,
            margin: f64::NAN,
            witnesses: Vec::new(),
            note: note.into(),
        }
    }

    /// Builds an entry from an accumulated margin: it holds iff the margin
    /// is at least `-tol` (NaN never holds). An empty quantifier passes
    /// with margin `+∞`.
    pub fn from_worst(name: &str, mut worst: Worst) -> Self {
        if worst.tightest.is_none() && worst.flagged.is_some() {
            worst.margin = 0.0;
            worst.tightest = worst.flagged;
        }
        let holds = worst.margin >= -worst.tol;
        let witnesses = if worst.failures.is_empty() {
            worst.tightest.into_iter().collect()
        } else {
            worst.failures
        };
        Entry {
            name: name.to_string(),
            holds,
            status: if holds { EntryStatus::Pass } else { EntryStatus::Fail },
            margin: worst.margin,
            witnesses,
            note: String::new(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

/// Running minimum of margins with witness bookkeeping.
#[derive(Clone, Debug)]
pub struct Worst {
    pub margin: f64,
    tol: f64,
    tightest: Option<usize>,
    failures: Vec<usize>,
    flagged: Option<usize>,
}

impl Worst {
    pub fn new(tol: f64) -> Self {
        Worst { margin: f64::INFINITY, tol, tightest: None, failures: Vec::new(), flagged: None }
    }

    /// A boolean outcome. A failure records `-∞`; a pass leaves numeric
    /// margins alone and only turns an otherwise empty margin into 0.
    pub fn flag(&mut self, ok: bool, witness: usize) {
        if ok {
            self.flagged.get_or_insert(witness);
        } else {
            self.add(f64::NEG_INFINITY, witness);
        }
    }

    /// Records one margin. NaN is sticky.
    pub fn add(&mut self, margin: f64, witness: usize) {
        if !self.margin.is_nan() && (margin.is_nan() || margin < self.margin) {
            self.margin = margin;
            self.tightest = Some(witness);
        }
        if !(margin >= -self.tol)
            && self.failures.len() < MAX_WITNESSES
            && !self.failures.contains(&witness)
        {
            self.failures.push(witness);
        }
    }

    pub fn is_empty(&self) -> bool {
        self.tightest.is_none() && self.flagged.is_none()
    }
}

/// The per-entry results plus their conjunction.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub entries: Vec<Entry>,
    pub overall: bool,
}

impl Certificate {
    pub fn new() -> Self {
        Certificate { entries: Vec::new(), overall: true }
    }

    pub fn push(&mut self, entry: Entry) {
        self.overall &= entry.holds;
        self.entries.push(entry);
    }

    pub fn extend(&mut self, entries: impl IntoIterator<Item = Entry>) {
        for e in entries {
            self.push(e);
        }
    }

    pub fn get(&self, name: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Entry> {
        self.entries.iter().filter(|e| !e.holds)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Everything the checks need, rebuilt from the recorded iterates.
///
/// Iterates past the last recorded index `T` are taken to equal `x̄`. The
/// `continuation` entry verifies that this choice is an admissible
/// continuation of the construction, which makes every series tail exact.
pub struct Context<'a> {
    pub result: &'a RunResult,
    pub problem: &'a Problem,
    pub gauge: &'a GaugeFunction,
    pub schedule: &'a Schedule,
    points: Vec<Point>,
    /// `rho[k][x] = ρ(x, x_k)`.
    rho: Vec<Vec<ExtReal>>,
    /// Recomputed `S_0 … S_T`.
    sets: Vec<Vec<Point>>,
}

impl<'a> Context<'a> {
    pub fn new(
        result: &'a RunResult,
        problem: &'a Problem,
        gauge: &'a GaugeFunction,
        schedule: &'a Schedule,
    ) -> Result<Self> {
        let its = &result.trace.iterates;
        if its.is_empty() {
            return Err(Error::TraceMismatch("trace has no iterates".into()));
        }
        let n = problem.space.len();
        for (k, it) in its.iter().enumerate() {
            if it.index != k {
                return Err(Error::TraceMismatch(format!("iterate {k} carries index {}", it.index)));
            }
            if it.point >= n {
                return Err(Error::TraceMismatch(format!("iterate {k} names point {} of {n}", it.point)));
            }
        }
        let points: Vec<Point> = its.iter().map(|it| it.point).collect();
        if result.xbar != *points.last().expect("nonempty") {
            return Err(Error::TraceMismatch("xbar is not the last iterate".into()));
        }
        schedule.check_shape()?;

        let space = &problem.space;
        let mut rho = Vec::with_capacity(points.len());
        for &xk in &points {
            let row = space.points().map(|x| gauge.try_eval(space, x, xk)).collect::<Result<Vec<_>>>()?;
            rho.push(row);
        }
        let mut ctx = Context { result, problem, gauge, schedule, points, rho, sets: Vec::new() };
        ctx.sets = ctx.rebuild_sets();
        Ok(ctx)
    }

    fn rebuild_sets(&self) -> Vec<Vec<Point>> {
        let pr = self.problem;
        let x0 = self.points[0];
        let f0 = pr.f(x0).value();
        let d0 = self.delta(0);
        let s0: Vec<Point> = pr
            .space
            .points()
            .filter(|&x| (pr.f(x) + self.rho[0][x].scale(d0)).value() <= f0)
            .collect();
        let mut sets = vec![s0];
        for i in 1..self.points.len() {
            let prev = &sets[i - 1];
            let xi = self.points[i];
            let j = self.j(i);
            let delta_j = self.delta(j);
            let fi = pr.f(xi).value();
            let next: Vec<Point> = prev
                .iter()
                .copied()
                .filter(|&x| {
                    let fx = pr.f(x);
                    let r = self.rho[i][x];
                    if !fx.is_finite() || !r.is_finite() {
                        return false;
                    }
                    let mut lhs = fx.value() + delta_j * r.value();
                    for k in 0..j {
                        let rk = self.rho[k][x];
                        if !rk.is_finite() {
                            return false;
                        }
                        lhs += self.delta(k) * (rk.value() - self.rho[k][xi].value());
                    }
                    lhs <= fi
                })
                .collect();
            sets.push(next);
        }
        sets
    }

    /// Index of the last recorded iterate.
    pub fn t(&self) -> usize {
        self.points.len() - 1
    }

    pub fn xbar(&self) -> Point {
        self.points[self.t()]
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// `x_k`, continued by `x̄` past `T`.
    pub fn x(&self, k: usize) -> Point {
        self.points[k.min(self.t())]
    }

    /// `ρ(x, x_k)`, continued past `T`.
    pub fn rho(&self, x: Point, k: usize) -> ExtReal {
        self.rho[k.min(self.t())][x]
    }

    /// `ρ(x, x̄)`.
    pub fn rho_xbar(&self, x: Point) -> ExtReal {
        self.rho[self.t()][x]
    }

    /// `ρ(x_{i+1}, x_i)`; zero from `T` on.
    pub fn chain(&self, i: usize) -> f64 {
        if i >= self.t() {
            0.0
        } else {
            self.rho[i][self.points[i + 1]].value()
        }
    }

    pub fn f(&self, x: Point) -> ExtReal {
        self.problem.f(x)
    }

    pub fn delta(&self, k: usize) -> f64 {
        self.schedule.delta(k)
    }

    pub fn horizon(&self) -> Horizon {
        self.schedule.horizon()
    }

    pub fn j(&self, i: usize) -> usize {
        self.schedule.j(i)
    }

    pub fn tol(&self) -> f64 {
        self.schedule.tol_cert
    }

    /// Recomputed `S_i` for `i ≤ T`, ascending.
    pub fn set(&self, i: usize) -> &[Point] {
        &self.sets[i]
    }

    pub fn in_set(&self, i: usize, x: Point) -> bool {
        self.sets[i].binary_search(&x).is_ok()
    }

    /// `Σ_{k ∈ range} δ_k ρ(x, x_k)`.
    pub fn weighted(&self, x: Point, range: Range<usize>) -> ExtReal {
        range.map(|k| self.rho(x, k).scale(self.delta(k))).sum()
    }

    /// `Σ_k δ_k ρ(x, x_k)` over all `k`, the tail past `T` summed in closed
    /// form against `x̄`. Infinite when the tail diverges and `x ≠ x̄`.
    pub fn full_series(&self, x: Point) -> ExtReal {
        let t = self.t();
        let head = self.weighted(x, 0..t + 1);
        let tail = self.schedule.delta.tail_sum(t);
        let r = self.rho_xbar(x);
        if r.value() == 0.0 {
            head
        } else if tail.is_infinite() {
            ExtReal::INFINITY
        } else {
            head + r.scale(tail)
        }
    }

    /// `sup_{n ≥ n_min} (Σ_{i=from}^{n-1} ρ(x_{i+1}, x_i) + ρ(x̄, x_n))`.
    /// The bracket is constant once `n ≥ T`, so the sup is a finite max.
    pub fn sup_chain(&self, from: usize, n_min: usize) -> f64 {
        let last = n_min.max(self.t());
        let mut best = f64::NEG_INFINITY;
        for n in n_min..=last {
            let chain: f64 = (from..n).map(|i| self.chain(i)).sum();
            best = best.max(chain + self.rho(self.xbar(), n).value());
        }
        best
    }

    /// `f(x) + Σ_{k < j_i} δ_k ρ(x, x_k)`, the selection objective of step `i`.
    pub fn objective(&self, i: usize, x: Point) -> ExtReal {
        self.f(x) + self.weighted(x, 0..self.j(i))
    }

    /// Slack of `x` in the inequality defining `S_m` (negative when `x`
    /// violates it).
    pub fn member_slack(&self, m: usize, x: Point) -> f64 {
        let xm = self.x(m);
        let fm = self.f(xm).value();
        if m == 0 {
            return fm - (self.f(x) + self.rho(x, 0).scale(self.delta(0))).value();
        }
        let j = self.j(m);
        let mut lhs = self.f(x) + self.rho(x, m).scale(self.delta(j));
        let mut correction = 0.0;
        for k in 0..j {
            let rk = self.rho(x, k);
            if rk.is_infinite() {
                return f64::NEG_INFINITY;
            }
            correction += self.delta(k) * (rk.value() - self.rho(xm, k).value());
        }
        lhs = lhs + correction;
        fm - lhs.value()
    }

    /// Gauge radius attached to `S_i`: `ε/δ_0` for `i = 0`, `ε_i` after.
    pub fn radius(&self, i: usize) -> f64 {
        if i == 0 {
            self.problem.epsilon / self.delta(0)
        } else {
            self.schedule.eps(i)
        }
    }

    /// All points except `x̄`.
    pub fn others(&self) -> impl Iterator<Item = Point> + '_ {
        let xbar = self.xbar();
        self.problem.space.points().filter(move |&x| x != xbar)
    }
}

/// Which corollary-level checks to add on top of the main theorem.
#[derive(Clone, Debug, Default)]
pub struct Request {
    /// Enables the slope bound `|∇f|(x̄) ≤ ε/λ` when the run is normalized
    /// with `δ_0 = ε/λ`.
    pub lambda: Option<f64>,
    /// Power-norm scaling check; the run must use the substituted parameters.
    pub t4: Option<T4Params>,
    /// Ekeland form (`N = 1`, `ρ = d`, `δ_0 = ε/λ`); needs `lambda`.
    pub ekeland: bool,
}

/// Runs every applicable check.
///
/// Errors only when the request itself is inconsistent with the run
/// (wrong mode or parameters) or the trace is structurally broken;
/// violated inequalities are reported as failing entries.
pub fn certify(
    result: &RunResult,
    problem: &Problem,
    gauge: &GaugeFunction,
    schedule: &Schedule,
    request: &Request,
) -> Result<Certificate> {
    let ctx = Context::new(result, problem, gauge, schedule)?;
    let mut cert = Certificate::new();
    cert.extend(main_theorem_entries(&ctx)?);
    cert.extend(c4_entries(&ctx));
    cert.push(su10_plus_entry(&ctx));
    cert.extend(c6_entries(&ctx));
    if let Some(t4) = &request.t4 {
        cert.extend(check_t4(&ctx, t4)?);
    }
    if request.ekeland {
        let lambda = request
            .lambda
            .ok_or_else(|| Error::InvalidCertificateRequest("the Ekeland form needs lambda".into()))?;
        cert.extend(check_ekeland(result, problem, gauge, schedule, lambda)?);
    }
    if let Some(lambda) = request.lambda {
        let effective = match &request.t4 {
            Some(t4) => t4.lambda.powf(t4.p),
            None => lambda,
        };
        cert.extend(slope::slope_entries(&ctx, effective));
    }
    Ok(cert)
}

/// Relative float comparison used for recorded columns and parameters.
pub fn close(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}
