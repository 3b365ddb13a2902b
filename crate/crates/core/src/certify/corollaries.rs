//! Finite-horizon consequences, the triangle-inequality refinements, the
//! power-norm scaling and the Ekeland form.

use super::checks::base;
use super::{close, Context, Entry, Worst};
use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::problems::{DeltaSeq, EpsRule, Horizon, Problem, Schedule};
use crate::solver::RunResult;
use crate::spaces::{GaugeFunction, GaugeKind, Point};

/// Finite-difference steps for the smoothness probe.
pub const FD_STEPS: [f64; 2] = [1e-2, 1e-3];
/// Allowed gap between central differences and the analytic derivative.
pub const FD_TOL: f64 = 1e-5;

fn finite_n(ctx: &Context) -> Option<usize> {
    match ctx.horizon() {
        Horizon::Finite(n) => Some(n),
        Horizon::Infinite => None,
    }
}

/// Largest recorded index that matters for `m ≥ N` statements: beyond
/// `max(T, N)` every bracket is constant.
fn top(ctx: &Context, n: usize) -> usize {
    ctx.t().max(n)
}

fn c4_21_margin(ctx: &Context, x: Point, m: usize, n: usize) -> f64 {
    let d = ctx.delta(n - 1);
    let xbar = ctx.xbar();
    (base(ctx, x, n) + d * ctx.rho(x, m).value()) - (base(ctx, xbar, n) + d * ctx.rho(xbar, m).value())
}

fn c4_22_margin(ctx: &Context, x: Point, m: usize, n: usize) -> f64 {
    let d = ctx.delta(n - 1);
    let chain: f64 = (m..ctx.t()).map(|i| ctx.chain(i)).sum();
    (base(ctx, x, n) + d * ctx.rho(x, m).value()) - (base(ctx, ctx.xbar(), n) + d * chain)
}

fn c64_margin(ctx: &Context, x: Point, n: usize) -> f64 {
    let d = ctx.delta(n - 1);
    (base(ctx, x, n) + d * ctx.rho_xbar(x).value()) - base(ctx, ctx.xbar(), n)
}

fn c4_11_margin(ctx: &Context, n: usize) -> f64 {
    let xbar = ctx.xbar();
    let f0 = ctx.f(ctx.x(0)).value();
    f0 - (ctx.f(xbar) + ctx.weighted(xbar, 0..n)).value()
}

fn c4_12_margin(ctx: &Context, n: usize) -> f64 {
    let f0 = ctx.f(ctx.x(0)).value();
    let chain: f64 = (n - 1..ctx.t()).map(|i| ctx.chain(i)).sum();
    f0 - (base(ctx, ctx.xbar(), n) + ctx.delta(n - 1) * chain)
}

/// Per-point "for all m ≥ m0" statement: checked at the constant tail
/// index, with the smallest admissible `m0 ≥ N` reported.
fn eventually(
    ctx: &Context,
    name: &str,
    n: usize,
    margin: impl Fn(Point, usize) -> f64,
) -> Entry {
    let top = top(ctx, n);
    let mut w = Worst::new(ctx.tol());
    let mut worst_m0 = n;
    for x in ctx.others() {
        w.add(margin(x, top), x);
        let mut m0 = top;
        while m0 > n && margin(x, m0 - 1) >= -ctx.tol() {
            m0 -= 1;
        }
        worst_m0 = worst_m0.max(m0);
    }
    Entry::from_worst(name, w).with_note(format!("largest m0 = {worst_m0}"))
}

/// The five consequences for `N < ∞`.
pub fn c4_entries(ctx: &Context) -> Vec<Entry> {
    let Some(n) = finite_n(ctx) else {
        return ["C4-11", "C4-12", "C4-21", "C4-22", "ss10-2"]
            .iter()
            .map(|name| Entry::skipped(name, "N = inf"))
            .collect();
    };
    let tol = ctx.tol();
    let mut c11 = Worst::new(tol);
    c11.add(c4_11_margin(ctx, n), 0);
    let mut c12 = Worst::new(tol);
    c12.add(c4_12_margin(ctx, n), 0);
    let mut ss = Worst::new(tol);
    for x in ctx.problem.space.points() {
        ss.add(c64_margin(ctx, x, n), x);
    }
    vec![
        Entry::from_worst("C4-11", c11),
        Entry::from_worst("C4-12", c12).with_note("chain series summed exactly: links vanish past T"),
        eventually(ctx, "C4-21", n, |x, m| c4_21_margin(ctx, x, m, n)),
        eventually(ctx, "C4-22", n, |x, m| c4_22_margin(ctx, x, m, n)),
        Entry::from_worst("ss10-2", ss),
    ]
}

/// The complementary estimate for points already excluded at some
/// recorded `m < N`. Skipped when no such point exists.
pub fn su10_plus_entry(ctx: &Context) -> Entry {
    let Some(n) = finite_n(ctx) else {
        return Entry::skipped("su10+", "N = inf");
    };
    let xbar = ctx.xbar();
    let rhs = base(ctx, xbar, n) + ctx.delta(n - 1) * ctx.sup_chain(n - 1, n);
    let mut w = Worst::new(ctx.tol());
    let mut instances = 0usize;
    for x in ctx.others() {
        for m in 0..n.min(ctx.t() + 1) {
            if ctx.in_set(m, x) {
                continue;
            }
            instances += 1;
            let lhs = (ctx.f(x) + ctx.weighted(x, 0..m + 1)).value();
            w.add(lhs - rhs, x);
        }
    }
    if w.is_empty() {
        return Entry::skipped("su10+", "no point leaves the sets before N");
    }
    Entry::from_worst("su10+", w).with_note(format!("{instances} (x, m) instances"))
}

/// Empirical counts of the implications that hold under the triangle
/// inequality; every count but `instances` should be zero.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ImplicationCounts {
    /// `(x, m)` pairs examined.
    pub instances: usize,
    pub c12_not_c11: usize,
    pub c22_not_c21: usize,
    pub c21_not_c64: usize,
}

impl ImplicationCounts {
    pub fn violations(&self) -> usize {
        self.c12_not_c11 + self.c22_not_c21 + self.c21_not_c64
    }
}

/// Counts violated implications over every `x ≠ x̄` and `N ≤ m ≤ max(T, N)`.
/// `None` for `N = ∞`.
pub fn implication_counts(ctx: &Context) -> Option<ImplicationCounts> {
    let n = finite_n(ctx)?;
    let ok = |m: f64| m >= -ctx.tol();
    let mut c = ImplicationCounts::default();
    if ok(c4_12_margin(ctx, n)) && !ok(c4_11_margin(ctx, n)) {
        c.c12_not_c11 += 1;
    }
    for x in ctx.others() {
        let c64 = ok(c64_margin(ctx, x, n));
        for m in n..=top(ctx, n) {
            c.instances += 1;
            let c21 = ok(c4_21_margin(ctx, x, m, n));
            let c22 = ok(c4_22_margin(ctx, x, m, n));
            if c22 && !c21 {
                c.c22_not_c21 += 1;
            }
            if c21 && !c64 {
                c.c21_not_c64 += 1;
            }
        }
    }
    Some(c)
}

/// Chain bound, implication counts and strict minimality for gauges with
/// the triangle inequality and `N < ∞`.
pub fn c6_entries(ctx: &Context) -> Vec<Entry> {
    let names = ["C6-chain", "C6-implications", "C6-4"];
    let skip = |why: &str| names.iter().map(|n| Entry::skipped(n, why)).collect();
    if !ctx.gauge.has_triangle() {
        return skip("gauge has no triangle flag");
    }
    let Some(n) = finite_n(ctx) else {
        return skip("N = inf");
    };
    let tol = ctx.tol();
    let xbar = ctx.xbar();
    let mut chain = Worst::new(tol);
    for m in 0..ctx.t() {
        for nn in m + 1..=ctx.t() {
            let links: f64 = (m..nn).map(|i| ctx.chain(i)).sum();
            chain.add(links + ctx.rho(xbar, nn).value() - ctx.rho(xbar, m).value(), m);
        }
    }
    let counts = implication_counts(ctx).expect("finite horizon");
    let mut imp = Worst::new(0.0);
    imp.add(0.0 - counts.violations() as f64, 0);
    let imp_note = format!(
        "{} instances; C4-12 without C4-11: {}; C4-22 without C4-21: {}; C4-21 without C6-4: {}",
        counts.instances, counts.c12_not_c11, counts.c22_not_c21, counts.c21_not_c64
    );
    let mut strict = Worst::new(tol);
    for x in ctx.others() {
        strict.add(c64_margin(ctx, x, n), x);
    }
    vec![
        Entry::from_worst("C6-chain", chain),
        Entry::from_worst("C6-implications", imp).with_note(imp_note),
        Entry::from_worst("C6-4", strict),
    ]
}

/// Original (unsubstituted) parameters of the power-norm form: `λ`, `p`,
/// `ε` and the sequences `{δ_i}`, `{ε_i}`.
#[derive(Clone, Debug, PartialEq)]
pub struct T4Params {
    pub lambda: f64,
    pub p: f64,
    pub epsilon: f64,
    pub delta: DeltaSeq,
    pub eps: EpsRule,
}

impl T4Params {
    pub fn new(lambda: f64, p: f64, epsilon: f64, delta: DeltaSeq, eps: EpsRule) -> Result<Self> {
        for (what, v) in [("lambda", lambda), ("p", p), ("epsilon", epsilon)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!("{what} must be positive, got {v}")));
            }
        }
        if delta.horizon().is_finite() {
            return Err(Error::InvalidParameter("the power-norm form needs N = inf".into()));
        }
        Ok(T4Params { lambda, p, epsilon, delta, eps })
    }

    /// `ε / λ^p`.
    pub fn weight_scale(&self) -> f64 {
        self.epsilon / self.lambda.powf(self.p)
    }

    /// The run inputs: `ε' = ε δ_0`, `ε'_i = ε_i^p`, `δ'_i = (ε/λ^p) δ_i`.
    pub fn substituted(
        &self,
        problem: &Problem,
        cap: usize,
        tol_d: f64,
        tol_cert: f64,
    ) -> Result<(Problem, Schedule)> {
        let pr = problem.clone().with_epsilon(self.epsilon * self.delta.get(0))?;
        let sch = Schedule::new(self.delta.scaled(self.weight_scale())?, self.eps.powf(self.p), cap, tol_d, tol_cert)?;
        Ok((pr, sch))
    }

    fn check_matches(&self, ctx: &Context) -> Result<()> {
        let mismatch = |what: String| Err(Error::InvalidCertificateRequest(format!("scaling mismatch: {what}")));
        let p_ok = match ctx.gauge.kind() {
            GaugeKind::Power(q) => q == self.p,
            GaugeKind::Metric => self.p == 1.0,
            GaugeKind::Custom => false,
        };
        if !p_ok {
            return mismatch(format!("gauge {} is not the p = {} power norm", ctx.gauge.description(), self.p));
        }
        if ctx.horizon().is_finite() {
            return mismatch("run has a finite horizon".into());
        }
        let eps_run = ctx.problem.epsilon;
        if !close(eps_run, self.epsilon * self.delta.get(0)) {
            return mismatch(format!("run epsilon {eps_run} is not epsilon * delta_0"));
        }
        let c = self.weight_scale();
        let upto = ctx.schedule.cap.max(ctx.t()) + 1;
        for i in 0..=upto {
            if !close(ctx.delta(i), c * self.delta.get(i)) {
                return mismatch(format!("delta'_{i} = {} is not (eps/lambda^p) delta_{i}", ctx.delta(i)));
            }
            if i >= 1 && !close(ctx.schedule.eps(i), self.eps.get(i).powf(self.p)) {
                return mismatch(format!("eps'_{i} = {} is not eps_{i}^p", ctx.schedule.eps(i)));
            }
        }
        Ok(())
    }

    /// `Σ_i δ_i ‖x − x_i‖^p` with the original weights; the tail past `T`
    /// is centred at `x̄`.
    fn series(&self, ctx: &Context, x: Point) -> ExtReal {
        let space = &ctx.problem.space;
        let t = ctx.t();
        let mut s = ExtReal::ZERO;
        for k in 0..=t {
            s = s + ExtReal::finite(self.delta.get(k) * space.distance(x, ctx.x(k)).powf(self.p));
        }
        let r = space.distance(x, ctx.xbar());
        if r > 0.0 {
            let tail = self.delta.tail_sum(t);
            s = if tail.is_infinite() { ExtReal::INFINITY } else { s + tail * r.powf(self.p) };
        }
        s
    }
}

/// One central difference of the perturbation series along a grid axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DerivativeProbe {
    pub axis: usize,
    pub step: f64,
    pub finite_difference: f64,
    pub analytic: f64,
}

impl DerivativeProbe {
    pub fn error(&self) -> f64 {
        (self.finite_difference - self.analytic).abs()
    }
}

/// Central differences of `g(y) = Σ δ_i ‖y − x_i‖^p` at `x̄` along every
/// axis and step of [`FD_STEPS`], next to the analytic derivative. `None`
/// off box grids.
pub fn t4_derivative_probe(ctx: &Context, params: &T4Params) -> Option<Vec<DerivativeProbe>> {
    let grid = ctx.problem.space.as_grid()?;
    let t = ctx.t();
    let p = params.p;
    let tail = params.delta.tail_sum(t);
    let mut centers: Vec<(Vec<f64>, f64)> = (0..=t).map(|k| (grid.coords(ctx.x(k)), params.delta.get(k))).collect();
    centers.push((grid.coords(ctx.xbar()), tail));
    let norm = |y: &[f64], c: &[f64]| y.iter().zip(c).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
    let g = |y: &[f64]| centers.iter().map(|(c, w)| w * norm(y, c).powf(p)).sum::<f64>();
    let at = grid.coords(ctx.xbar());
    let mut out = Vec::new();
    for axis in 0..grid.dim() {
        let analytic: f64 = centers
            .iter()
            .map(|(c, w)| {
                let r = norm(&at, c);
                if r == 0.0 {
                    0.0
                } else {
                    w * p * r.powf(p - 2.0) * (at[axis] - c[axis])
                }
            })
            .sum();
        for &h in &FD_STEPS {
            let mut up = at.clone();
            up[axis] += h;
            let mut down = at.clone();
            down[axis] -= h;
            out.push(DerivativeProbe { axis, step: h, finite_difference: (g(&up) - g(&down)) / (2.0 * h), analytic });
        }
    }
    Some(out)
}

/// The power-norm conclusions with the original parameters.
///
/// Errors when the run was not made with the substituted parameters.
pub fn check_t4(ctx: &Context, params: &T4Params) -> Result<Vec<Entry>> {
    params.check_matches(ctx)?;
    let tol = ctx.tol();
    let pr = ctx.problem;
    let space = &pr.space;
    let xbar = ctx.xbar();
    let x0 = ctx.x(0);
    let f0 = pr.f(x0).value();
    let (inf, argmin) = pr.infimum();
    let gap = f0 - inf.value();

    let mut hyp = Worst::new(0.0);
    hyp.add(params.epsilon - gap, argmin);
    hyp.add(params.delta.get(0) - gap / params.epsilon, x0);

    let mut i = Worst::new(tol);
    i.add(params.lambda - space.distance(xbar, x0), 0);

    let mut ii = Worst::new(tol);
    for k in 1..=ctx.t().max(1) {
        ii.add(params.eps.get(k) - space.distance(xbar, ctx.x(k)), k);
    }

    let c = params.weight_scale();
    let gbar = params.series(ctx, xbar);
    let mut iii = Worst::new(tol);
    iii.add(f0 - (pr.f(xbar) + gbar.scale(c)).value(), 0);

    let rhs = pr.f(xbar) + gbar.scale(c);
    let mut iv = Worst::new(tol);
    for x in ctx.others() {
        iv.add((pr.f(x) + params.series(ctx, x).scale(c)).minus(rhs), x);
    }

    let smooth = if !(params.p > 1.0) {
        Entry::skipped("T4-smooth", "p <= 1")
    } else if params.delta.tail_sum(0).is_infinite() {
        Entry::skipped("T4-smooth", "weights are not summable")
    } else {
        match t4_derivative_probe(ctx, params) {
            None => Entry::skipped("T4-smooth", "needs grid coordinates"),
            Some(probes) => {
                let mut w = Worst::new(0.0);
                for (k, pr) in probes.iter().enumerate() {
                    w.add(FD_TOL - pr.error(), k);
                }
                let worst = probes.iter().map(|p| p.error()).fold(0.0, f64::max);
                Entry::from_worst("T4-smooth", w).with_note(format!("largest difference error {worst:e}"))
            }
        }
    };

    Ok(vec![
        Entry::from_worst("T4-hypotheses", hyp),
        Entry::from_worst("T4-i", i),
        Entry::from_worst("T4-ii", ii),
        Entry::from_worst("T4-iii", iii),
        Entry::from_worst("T4-iv", iv),
        smooth,
    ])
}

/// The Ekeland conclusions, evaluated from the problem data and `x̄` alone.
pub fn check_ekeland(
    result: &RunResult,
    problem: &Problem,
    gauge: &GaugeFunction,
    schedule: &Schedule,
    lambda: f64,
) -> Result<Vec<Entry>> {
    let bad = |what: &str| Err(Error::InvalidCertificateRequest(format!("Ekeland form needs {what}")));
    if schedule.horizon() != Horizon::Finite(1) {
        return bad("N = 1");
    }
    if gauge.kind() != GaugeKind::Metric {
        return bad("rho = d");
    }
    if !(lambda.is_finite() && lambda > 0.0) {
        return bad("lambda > 0");
    }
    let slope = problem.epsilon / lambda;
    if !close(schedule.delta0(), slope) {
        return bad("delta_0 = eps / lambda");
    }
    let tol = schedule.tol_cert;
    let space = &problem.space;
    let xbar = result.xbar;
    let x0 = problem.x0;
    let fbar = problem.f(xbar).value();

    let mut a = Worst::new(tol);
    a.add(lambda - space.distance(xbar, x0), xbar);
    let mut b = Worst::new(tol);
    b.add(problem.f0() - (fbar + slope * space.distance(xbar, x0)), xbar);
    let mut c = Worst::new(tol);
    for x in space.points().filter(|&x| x != xbar) {
        c.add((problem.f(x) + slope * space.distance(x, xbar)).minus(ExtReal::finite(fbar)), x);
    }
    Ok(vec![Entry::from_worst("T3-i", a), Entry::from_worst("T3-ii", b), Entry::from_worst("T3-iii", c)])
}
