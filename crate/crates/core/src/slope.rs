//! The perturbation series `g(u) = Σ δ_i ρ(u, x_i)` (with `δ_0 = 1`) and
//! slopes of `f` measured against it.

use crate::certify::{Context, Entry, Worst};
use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::problems::{Horizon, Problem, Schedule};
use crate::solver::RunResult;
use crate::spaces::{GaugeFunction, MetricSpace, Point};

/// Partial sums above this are reported as `+∞`.
pub const OVERFLOW: f64 = 1e300;

/// What the series holds past its listed centers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Tail {
    None,
    /// All remaining weight, `weight = Σ` of the rest, sits on one center.
    Known { center: Point, weight: f64 },
    /// Remaining centers unknown; only their total weight is.
    Unknown { weight: f64 },
}

#[derive(Clone, Debug)]
pub struct PerturbationSeries {
    centers: Vec<Point>,
    weights: Vec<f64>,
    tail: Tail,
    gauge: GaugeFunction,
}

/// A series value with the error bound of its truncation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GValue {
    pub value: ExtReal,
    /// `|value − true value| ≤ tail_bound`.
    pub tail_bound: f64,
}

impl PerturbationSeries {
    /// Requires `weights[0] = 1` and nonnegative weights.
    pub fn new(centers: Vec<Point>, weights: Vec<f64>, tail: Tail, gauge: GaugeFunction) -> Result<Self> {
        if centers.is_empty() || centers.len() != weights.len() {
            return Err(Error::InvalidParameter("need one weight per center and at least one center".into()));
        }
        if weights[0] != 1.0 {
            return Err(Error::InvalidParameter(format!("weights must start with 1, got {}", weights[0])));
        }
        let tail_weight = match tail {
            Tail::None => 0.0,
            Tail::Known { weight, .. } | Tail::Unknown { weight } => weight,
        };
        if weights.iter().chain([&tail_weight]).any(|w| !(*w >= 0.0)) {
            return Err(Error::InvalidParameter("weights must be nonnegative".into()));
        }
        Ok(PerturbationSeries { centers, weights, tail, gauge })
    }

    /// The series carried by a run, normalized by `δ_0`.
    ///
    /// For `N = ∞` the centers are `x_0 … x_T` and the remaining weight sits
    /// on `x̄`. For `N < ∞` the centers are `x_0 … x_{N-2}` followed by `x̄`
    /// with weight `δ_{N-1}`.
    pub fn from_run(ctx: &Context) -> Result<Self> {
        let d0 = ctx.delta(0);
        let (centers, weights, tail) = match ctx.horizon() {
            Horizon::Infinite => {
                let t = ctx.t();
                let centers: Vec<Point> = (0..=t).map(|k| ctx.x(k)).collect();
                let weights = (0..=t).map(|k| ctx.delta(k) / d0).collect();
                let rest = ctx.schedule.delta.tail_sum(t) / d0;
                (centers, weights, Tail::Known { center: ctx.xbar(), weight: rest })
            }
            Horizon::Finite(n) => {
                let mut centers: Vec<Point> = (0..n - 1).map(|k| ctx.x(k)).collect();
                let mut weights: Vec<f64> = (0..n - 1).map(|k| ctx.delta(k) / d0).collect();
                centers.push(ctx.xbar());
                weights.push(ctx.delta(n - 1) / d0);
                (centers, weights, Tail::None)
            }
        };
        Self::new(centers, weights, tail, ctx.gauge.clone())
    }

    pub fn centers(&self) -> &[Point] {
        &self.centers
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    /// Evaluates `g(u)`: the listed partial sum, plus the known tail, plus
    /// a bound for an unknown one (`weight · sup_v ρ(u, v)`).
    pub fn eval_g(&self, space: &MetricSpace, u: Point) -> GValue {
        let mut partial = 0.0;
        for (&c, &w) in self.centers.iter().zip(&self.weights) {
            let term = self.gauge.eval(space, u, c).scale(w);
            if term.is_infinite() {
                return GValue { value: ExtReal::INFINITY, tail_bound: 0.0 };
            }
            partial += term.value();
            if partial > OVERFLOW {
                return GValue { value: ExtReal::INFINITY, tail_bound: 0.0 };
            }
        }
        match self.tail {
            Tail::None => GValue { value: ExtReal::finite(partial), tail_bound: 0.0 },
            Tail::Known { center, weight } => {
                let r = self.gauge.eval(space, u, center);
                let value = if r.value() == 0.0 {
                    ExtReal::finite(partial)
                } else if weight.is_infinite() || r.is_infinite() {
                    ExtReal::INFINITY
                } else {
                    ExtReal::finite(partial) + weight * r.value()
                };
                GValue { value, tail_bound: 0.0 }
            }
            Tail::Unknown { weight } => {
                let reach = space.points().map(|v| self.gauge.eval(space, u, v)).max().unwrap_or(ExtReal::ZERO);
                if weight == 0.0 || reach.value() == 0.0 {
                    GValue { value: ExtReal::finite(partial), tail_bound: 0.0 }
                } else if weight.is_infinite() {
                    GValue { value: ExtReal::INFINITY, tail_bound: 0.0 }
                } else {
                    GValue { value: ExtReal::finite(partial), tail_bound: weight * reach.value() }
                }
            }
        }
    }
}

/// A slope value with the point attaining it and any descent ratios whose
/// denominator was negative.
#[derive(Clone, Debug, PartialEq)]
pub struct SlopeReport {
    pub value: f64,
    pub argmax: Option<Point>,
    /// Points `u` with `g(u) < g(x)` and `f(u) < f(x)`. Their ratio is
    /// counted with `|g(u) − g(x)|` in the denominator.
    pub anomalies: Vec<Point>,
}

fn ratio_scan(
    problem: &Problem,
    series: &PerturbationSeries,
    x: Point,
    candidates: impl Iterator<Item = Point>,
) -> Result<SlopeReport> {
    let space = &problem.space;
    let gx = series.eval_g(space, x).value;
    if gx.is_infinite() {
        return Err(Error::UndefinedSlope { point: x });
    }
    let fx = problem.f(x);
    if fx.is_infinite() {
        return Err(Error::InvalidParameter(format!("slope needs f({x}) finite")));
    }
    let mut report = SlopeReport { value: 0.0, argmax: None, anomalies: Vec::new() };
    for u in candidates.filter(|&u| u != x) {
        let gu = series.eval_g(space, u).value;
        if gu == gx || gu.is_infinite() {
            continue;
        }
        let num = fx.minus(problem.f(u)).max(0.0);
        if num == 0.0 {
            continue;
        }
        let den = gu.minus(gx);
        if den < 0.0 {
            report.anomalies.push(u);
        }
        let ratio = num / den.abs();
        if ratio > report.value {
            report.value = ratio;
            report.argmax = Some(u);
        }
    }
    Ok(report)
}

/// `sup_u [f(x) − f(u)]₊ / (g(u) − g(x))` over all `u` with `g(u) ≠ g(x)`;
/// 0 when nothing qualifies.
pub fn nonlocal_slope(problem: &Problem, series: &PerturbationSeries, x: Point) -> Result<SlopeReport> {
    ratio_scan(problem, series, x, problem.space.points())
}

/// The same ratio restricted to grid points `u` with `0 < d(u, x) ≤ r`
/// (up to relative rounding 1e-9), once per radius. Radii below the grid step are rejected.
pub fn local_slope(problem: &Problem, series: &PerturbationSeries, x: Point, radii: &[f64]) -> Result<Vec<f64>> {
    let grid = problem
        .space
        .as_grid()
        .ok_or_else(|| Error::InvalidParameter("local slope needs a box grid".into()))?;
    let step = grid.step().iter().copied().fold(f64::INFINITY, f64::min);
    let center = grid.indices(x);
    let mut out = Vec::with_capacity(radii.len());
    for &r in radii {
        if !(r >= step) {
            return Err(Error::EmptyNeighborhood { radius: r, step });
        }
        let lo: Vec<usize> = center
            .iter()
            .zip(grid.step())
            .map(|(&c, &s)| c.saturating_sub((r / s).ceil() as usize))
            .collect();
        let hi: Vec<usize> = center
            .iter()
            .zip(grid.step())
            .zip(grid.counts())
            .map(|((&c, &s), &n)| (c + (r / s).ceil() as usize).min(n - 1))
            .collect();
        let mut ball = Vec::new();
        let mut idx = lo.clone();
        loop {
            let u = grid.point_at(&idx);
            // grid coordinates carry rounding, so a nominal d = r counts as inside
            if problem.space.distance(u, x) <= r * (1.0 + 1e-9) {
                ball.push(u);
            }
            let mut axis = 0;
            while axis < idx.len() {
                if idx[axis] < hi[axis] {
                    idx[axis] += 1;
                    break;
                }
                idx[axis] = lo[axis];
                axis += 1;
            }
            if axis == idx.len() {
                break;
            }
        }
        out.push(ratio_scan(problem, series, x, ball.into_iter())?.value);
    }
    Ok(out)
}

/// Slope bound and its pointwise form at `x̄`. Skipped unless the run is
/// normalized with `δ_0 = ε/λ`.
pub fn slope_entries(ctx: &Context, lambda: f64) -> Vec<Entry> {
    let bound = ctx.problem.epsilon / lambda;
    if !crate::certify::close(ctx.delta(0), bound) {
        let why = format!("delta_0 = {} differs from eps/lambda = {bound}", ctx.delta(0));
        return vec![Entry::skipped("slope-bound", why.clone()), Entry::skipped("slope-pointwise", why)];
    }
    let series = match PerturbationSeries::from_run(ctx) {
        Ok(s) => s,
        Err(e) => {
            let mut w = Worst::new(0.0);
            w.flag(false, ctx.xbar());
            let fail = Entry::from_worst("slope-bound", w).with_note(e.to_string());
            return vec![fail.clone(), Entry { name: "slope-pointwise".into(), ..fail }];
        }
    };
    let xbar = ctx.xbar();
    let mut slope = Worst::new(ctx.tol());
    let note = match nonlocal_slope(ctx.problem, &series, xbar) {
        Ok(rep) => {
            slope.add(bound - rep.value, rep.argmax.unwrap_or(xbar));
            format!("slope {} vs eps/lambda {bound}; {} anomalies", rep.value, rep.anomalies.len())
        }
        Err(e) => {
            slope.flag(false, xbar);
            e.to_string()
        }
    };

    let space = &ctx.problem.space;
    let gbar = series.eval_g(space, xbar).value;
    let fbar = ctx.f(xbar);
    let mut pointwise = Worst::new(ctx.tol());
    for u in ctx.others() {
        let gu = series.eval_g(space, u).value;
        if gu > gbar {
            let num = fbar.minus(ctx.f(u)).max(0.0);
            let margin = if gu.is_infinite() { f64::INFINITY } else { bound * gu.minus(gbar) - num };
            pointwise.add(margin, u);
        }
    }
    vec![Entry::from_worst("slope-bound", slope).with_note(note), Entry::from_worst("slope-pointwise", pointwise)]
}

/// The slope bound entry for a run: `|∇f|(x̄) ≤ ε/λ` with its margin.
pub fn slope_bound_check(
    result: &RunResult,
    problem: &Problem,
    gauge: &GaugeFunction,
    schedule: &Schedule,
    lambda: f64,
) -> Result<Entry> {
    let ctx = Context::new(result, problem, gauge, schedule)?;
    Ok(slope_entries(&ctx, lambda).remove(0))
}

#[cfg(test)]
mod tests;
