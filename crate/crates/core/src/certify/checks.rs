//! Record consistency, construction invariants and conclusions (i)-(iv).

use super::{close, Context, Entry, Worst};
use crate::error::Result;
use crate::problems::{validate, Horizon};
use crate::solver::Status;
use crate::spaces::check_gauge_axioms;

/// Samples per axiom on spaces too large for exhaustive checking.
pub const AXIOM_BUDGET: usize = 2000;

/// Continuation steps simulated before giving up on a collapse to `{x̄}`.
pub const CONTINUATION_LIMIT: usize = 2000;

pub fn main_theorem_entries(ctx: &Context) -> Result<Vec<Entry>> {
    let mut out = vec![hypotheses(ctx)?, gauge_axioms(ctx)?];
    out.extend(records(ctx));
    out.push(termination(ctx));
    out.push(nesting(ctx));
    out.push(selection(ctx));
    out.push(continuation(ctx));
    out.push(su1(ctx));
    out.push(su7(ctx));
    out.push(conclusion_i(ctx));
    out.push(conclusion_ii(ctx));
    out.push(conclusion_iii(ctx));
    out.push(conclusion_iv(ctx));
    out.push(telescoping(ctx));
    out.push(monotone(ctx));
    Ok(out)
}

fn hypotheses(ctx: &Context) -> Result<Entry> {
    let rep = validate(ctx.problem, ctx.gauge, ctx.schedule)?;
    let mut w = Worst::new(0.0);
    w.add(rep.weak_min_slack, rep.weak_min_witness.unwrap_or(ctx.problem.x0));
    let note = format!(
        "inf f = {}; eps-minimal: {}; ies2: {}; weak form: {}",
        rep.computed_inf, rep.eps_min_ok, rep.ies2_ok, rep.weak_min_ok
    );
    Ok(Entry::from_worst("hypotheses", w).with_note(note))
}

fn gauge_axioms(ctx: &Context) -> Result<Entry> {
    let rep = check_gauge_axioms(&ctx.problem.space, ctx.gauge, AXIOM_BUDGET)?;
    let mut w = Worst::new(0.0);
    let mut failed = Vec::new();
    for c in &rep.checks {
        if c.passed {
            w.flag(true, 0);
        } else {
            for &p in c.counterexample.iter().flatten() {
                w.flag(false, p);
            }
            if c.counterexample.is_none() {
                w.flag(false, 0);
            }
            failed.push(c.name);
        }
    }
    let note = if failed.is_empty() {
        format!("{} ({})", ctx.gauge.description(), if rep.exhaustive { "exhaustive" } else { "sampled" })
    } else {
        format!("failed: {}", failed.join(", "))
    };
    Ok(Entry::from_worst("gauge-axioms", w).with_note(note))
}

fn discrepancy(recorded: f64, expected: f64) -> f64 {
    if close(recorded, expected) {
        0.0
    } else {
        -(recorded - expected).abs()
    }
}

fn records(ctx: &Context) -> Vec<Entry> {
    let its = &ctx.result.trace.iterates;
    let t = ctx.t();

    let mut x0 = Worst::new(0.0);
    x0.flag(ctx.points()[0] == ctx.problem.x0, 0);

    let mut f = Worst::new(0.0);
    let mut sched = Worst::new(0.0);
    let mut sizes = Worst::new(0.0);
    let mut slack = Worst::new(0.0);
    for (i, it) in its.iter().enumerate() {
        f.add(discrepancy(it.value, ctx.f(it.point).value()), i);
        let j = ctx.j(i);
        sched.flag(it.j == j, i);
        sched.add(discrepancy(it.eps, ctx.radius(i)), i);
        sched.add(discrepancy(it.delta_j, ctx.delta(j)), i);
        sizes.flag(it.set_size == ctx.set(i).len(), i);
        if !it.members.is_empty() {
            sizes.flag(it.members == ctx.set(i), i);
        }
        let expected = if i == 0 { 0.0 } else { excess(ctx, i) };
        slack.add(discrepancy(it.slack_used, expected), i);
    }

    let mut chain = Worst::new(0.0);
    let recorded = &ctx.result.trace.rho_chain;
    chain.flag(recorded.len() == t, t);
    for (i, &r) in recorded.iter().enumerate().take(t) {
        chain.add(discrepancy(r, ctx.chain(i)), i);
    }

    vec![
        Entry::from_worst("record-x0", x0),
        Entry::from_worst("record-f", f),
        Entry::from_worst("record-schedule", sched),
        Entry::from_worst("record-chain", chain),
        Entry::from_worst("record-sets", sizes),
        Entry::from_worst("record-slack", slack),
    ]
}

/// Objective excess of `x_i` over the infimum on the recomputed `S_{i-1}`.
fn excess(ctx: &Context, i: usize) -> f64 {
    let xi = ctx.x(i);
    let inf = ctx.set(i - 1).iter().map(|&x| ctx.objective(i, x)).min();
    match inf {
        Some(inf) => ctx.objective(i, xi).minus(inf),
        None => f64::INFINITY,
    }
}

fn termination(ctx: &Context) -> Entry {
    let t = ctx.t();
    let sch = ctx.schedule;
    let stop_at = |i: usize| -> Option<Status> {
        if ctx.set(i).len() == 1 {
            Some(Status::SingletonEarly)
        } else if ctx.gauge.modulus(sch.tol_d / 2.0) >= ctx.radius(i) {
            Some(Status::Converged)
        } else if i >= sch.cap {
            Some(Status::CapReached)
        } else {
            None
        }
    };
    let mut w = Worst::new(0.0);
    for i in 0..t {
        w.flag(stop_at(i).is_none(), i);
    }
    w.flag(stop_at(t) == Some(ctx.result.status), t);

    let xbar = ctx.xbar();
    let space = &ctx.problem.space;
    let bound = if ctx.set(t).len() == 1 {
        0.0
    } else {
        2.0 * ctx.set(t).iter().map(|&x| space.distance(x, xbar)).fold(0.0, f64::max)
    };
    w.add(discrepancy(ctx.result.final_diam_bound, bound), t);
    if ctx.result.status == Status::Converged {
        w.flag(bound <= sch.tol_d, t);
    }
    Entry::from_worst("termination", w).with_note(format!("{} at T = {t}", ctx.result.status))
}

fn nesting(ctx: &Context) -> Entry {
    let mut w = Worst::new(ctx.tol());
    for i in 1..=ctx.t() {
        let xi = ctx.x(i);
        for m in 0..i {
            w.add(ctx.member_slack(m, xi), i);
        }
    }
    Entry::from_worst("nesting", w)
}

fn selection(ctx: &Context) -> Entry {
    let mut w = Worst::new(ctx.tol());
    for i in 1..=ctx.t() {
        let allowance = ctx.delta(ctx.j(i)) * ctx.radius(i);
        w.add(allowance - excess(ctx, i), i);
    }
    Entry::from_worst("selection", w)
}

/// Simulates the construction past `T` with every selection equal to `x̄`
/// and checks that each selection is admissible until the set collapses.
fn continuation(ctx: &Context) -> Entry {
    let t = ctx.t();
    let xbar = ctx.xbar();
    let mut set: Vec<usize> = ctx.set(t).to_vec();
    let mut w = Worst::new(ctx.tol());
    let mut i = t;
    while set.len() > 1 || set.first() != Some(&xbar) {
        i += 1;
        if i > t + CONTINUATION_LIMIT || set.is_empty() {
            w.flag(false, i);
            return Entry::from_worst("continuation", w)
                .with_note(format!("no collapse to x̄ within {CONTINUATION_LIMIT} steps"));
        }
        let inf = set.iter().map(|&x| ctx.objective(i, x)).min().expect("nonempty");
        let allowance = ctx.delta(ctx.j(i)) * ctx.radius(i);
        let margin = allowance - ctx.objective(i, xbar).minus(inf);
        w.add(margin, i);
        if !(margin >= -ctx.tol()) {
            // later steps would rest on an inadmissible selection
            return Entry::from_worst("continuation", w)
                .with_note(format!("x̄ is not an admissible selection at step {i}"));
        }
        set.retain(|&x| ctx.member_slack(i, x) >= 0.0);
    }
    let note = if i == t { "S_T = {x̄}".to_string() } else { format!("collapses at step {i}") };
    Entry::from_worst("continuation", w).with_note(note)
}

fn su1(ctx: &Context) -> Entry {
    let mut w = Worst::new(ctx.tol());
    let r = ctx.radius(0);
    for &x in ctx.set(0) {
        w.add(r - ctx.rho(x, 0).value(), x);
    }
    Entry::from_worst("su1", w)
}

fn su7(ctx: &Context) -> Entry {
    let mut w = Worst::new(ctx.tol());
    for i in 1..=ctx.t() {
        let r = ctx.radius(i);
        for &x in ctx.set(i) {
            w.add(r - ctx.rho(x, i).value(), x);
        }
    }
    Entry::from_worst("su7", w)
}

fn conclusion_i(ctx: &Context) -> Entry {
    let mut w = Worst::new(ctx.tol());
    w.add(ctx.radius(0) - ctx.rho(ctx.xbar(), 0).value(), 0);
    Entry::from_worst("i", w)
}

fn conclusion_ii(ctx: &Context) -> Entry {
    let mut w = Worst::new(ctx.tol());
    for i in 1..=ctx.t().max(1) {
        w.add(ctx.radius(i) - ctx.rho(ctx.xbar(), i).value(), i);
    }
    Entry::from_worst("ii", w)
}

fn conclusion_iii(ctx: &Context) -> Entry {
    let xbar = ctx.xbar();
    let f0 = ctx.f(ctx.x(0)).value();
    let fbar = ctx.f(xbar).value();
    let mut w = Worst::new(ctx.tol());
    match ctx.horizon() {
        Horizon::Infinite => {
            let mut partial = 0.0;
            let mut monotone = true;
            for k in 0..=ctx.t() {
                let next = partial + ctx.rho(xbar, k).value() * ctx.delta(k);
                monotone &= next >= partial;
                partial = next;
                w.add(f0 - (fbar + partial), k);
            }
            w.flag(monotone, ctx.t());
            Entry::from_worst("iii", w).with_note("series exact: terms vanish past T")
        }
        Horizon::Finite(n) => {
            let head = ctx.weighted(xbar, 0..n - 1).value();
            let sup = ctx.sup_chain(n - 1, n - 1);
            let chain_total: f64 = (n - 1..ctx.t()).map(|i| ctx.chain(i)).sum();
            w.flag(chain_total.is_finite(), n - 1);
            w.add(f0 - (fbar + head + ctx.delta(n - 1) * sup), 0);
            Entry::from_worst("iii", w).with_note(format!("sup term {sup}, chain series {chain_total}"))
        }
    }
}

fn conclusion_iv(ctx: &Context) -> Entry {
    let xbar = ctx.xbar();
    let mut w = Worst::new(ctx.tol());
    match ctx.horizon() {
        Horizon::Infinite => {
            let rhs = ctx.f(xbar) + ctx.full_series(xbar);
            let mut divergent = 0usize;
            for x in ctx.others() {
                let lhs = ctx.f(x) + ctx.full_series(x);
                if lhs.is_infinite() {
                    divergent += 1;
                }
                w.add(lhs.minus(rhs), x);
            }
            Entry::from_worst("iv", w).with_note(format!("{divergent} points with a divergent left side"))
        }
        Horizon::Finite(n) => {
            let top = ctx.t().max(n);
            let mut worst_m0 = n;
            for x in ctx.others() {
                let margin = |m: usize| us10_margin(ctx, x, m);
                w.add(margin(top), x);
                let mut m0 = top;
                while m0 > n && margin(m0 - 1) >= -ctx.tol() {
                    m0 -= 1;
                }
                worst_m0 = worst_m0.max(m0);
            }
            Entry::from_worst("iv", w).with_note(format!("largest m0 = {worst_m0}"))
        }
    }
}

/// `B(x) = f(x) + Σ_{i ≤ N-2} δ_i ρ(x, x_i)`.
pub(crate) fn base(ctx: &Context, x: usize, n: usize) -> f64 {
    (ctx.f(x) + ctx.weighted(x, 0..n - 1)).value()
}

/// Margin of the `N < ∞` strict inequality at `(x, m)`, `m ≥ N`.
pub(crate) fn us10_margin(ctx: &Context, x: usize, m: usize) -> f64 {
    let Horizon::Finite(n) = ctx.horizon() else { unreachable!("finite horizon only") };
    let d = ctx.delta(n - 1);
    let lhs = base(ctx, x, n) + d * ctx.rho(x, m).value();
    let rhs = base(ctx, ctx.xbar(), n) + d * ctx.sup_chain(m, m);
    lhs - rhs
}

/// The three summed forms of the one-step inequalities, on every recorded
/// pair `m ≤ n`. The witness is `m`.
fn telescoping(ctx: &Context) -> Entry {
    let t = ctx.t();
    let xbar = ctx.xbar();
    let fbar = ctx.f(xbar).value();
    let mut w = Worst::new(ctx.tol());
    let big_n = match ctx.horizon() {
        Horizon::Finite(n) => n,
        Horizon::Infinite => usize::MAX,
    };
    for m in 0..=t {
        let xm = ctx.x(m);
        let fm = ctx.f(xm).value();
        let back = ctx.weighted(xm, 0..m).value();
        for nn in m..=t {
            let lhs = if big_n > nn {
                fbar + ctx.weighted(xbar, 0..nn + 1).value() - back
            } else {
                let d = ctx.delta(big_n - 1);
                let tail_chain = |from: usize| -> f64 {
                    (from..nn).map(|k| ctx.chain(k)).sum::<f64>() + ctx.rho(xbar, nn).value()
                };
                if big_n <= m {
                    let mut s = fbar;
                    for k in 0..big_n - 1 {
                        s += ctx.delta(k) * (ctx.rho(xbar, k).value() - ctx.rho(xm, k).value());
                    }
                    s + d * tail_chain(m)
                } else {
                    fbar + ctx.weighted(xbar, 0..big_n - 1).value() - back + d * tail_chain(big_n - 1)
                }
            };
            w.add(fm - lhs, m);
        }
    }
    Entry::from_worst("telescoping", w)
}

/// `V_i = f(x_i) + Σ_{k < j_i} δ_k ρ(x_i, x_k)` is nonincreasing.
fn monotone(ctx: &Context) -> Entry {
    let mut w = Worst::new(ctx.tol());
    for i in 0..ctx.t() {
        let v = ctx.objective(i, ctx.x(i));
        let next = ctx.objective(i + 1, ctx.x(i + 1));
        w.add(v.minus(next), i + 1);
    }
    Entry::from_worst("monotone", w)
}
