//! The nested-set construction: `S_0 ⊇ S_1 ⊇ …` with near-minimal
//! selections `x_i ∈ S_{i-1}`, stopped once the sets collapse or the
//! gauge modulus certifies a small enough diameter.

mod export;
mod oracle;

pub use export::{TraceFile, TraceMeta, TraceRow};
pub use oracle::{ExhaustiveOracle, Oracle, Selection, SlackOracle, EXHAUSTIVE_BUDGET};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::problems::{Problem, Schedule};
use crate::spaces::{GaugeFunction, Point};

#[derive(Clone, Debug, PartialEq)]
pub struct Iterate {
    pub index: usize,
    pub point: Point,
    /// `j_i = min{i, N - 1}`.
    pub j: usize,
    /// `f(x_i)`.
    pub value: f64,
    /// Members of `S_i`, ascending. Empty when the iterate was read back
    /// from a trace file.
    pub members: Vec<Point>,
    pub set_size: usize,
    /// Gauge radius of `S_i` around `x_i`: `ε/δ_0` for `i = 0`, `ε_i` after.
    pub eps: f64,
    pub delta_j: f64,
    /// Objective excess of `x_i` over the infimum on `S_{i-1}`.
    pub slack_used: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Trace {
    pub iterates: Vec<Iterate>,
    /// `ρ(x_{i+1}, x_i)` for every recorded `i` but the last.
    pub rho_chain: Vec<f64>,
    /// `ρ(x̄, x_i)` for every recorded `i`.
    pub rho_to_limit: Vec<f64>,
}

impl Trace {
    pub fn points(&self) -> Vec<Point> {
        self.iterates.iter().map(|it| it.point).collect()
    }

    pub fn last_index(&self) -> usize {
        self.iterates.len() - 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    /// The modulus bound certified the target diameter.
    Converged,
    /// The iteration cap was hit first.
    CapReached,
    /// Some `S_i` shrank to a single point; every later iterate equals it.
    SingletonEarly,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Converged => "converged",
            Status::CapReached => "cap-reached",
            Status::SingletonEarly => "singleton-early",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Status {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "converged" => Ok(Status::Converged),
            "cap-reached" => Ok(Status::CapReached),
            "singleton-early" => Ok(Status::SingletonEarly),
            other => Err(Error::InvalidParameter(format!("unknown status {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunResult {
    pub xbar: Point,
    pub trace: Trace,
    pub status: Status,
    /// Certified metric diameter of the last set, which contains `x̄` and
    /// every later iterate.
    pub final_diam_bound: f64,
}

/// The state after step `i - 1`: iterates `x_0 … x_{i-1}` and `S_{i-1}`.
#[derive(Clone, Debug)]
pub struct StepState {
    pub points: Vec<Point>,
    pub set: Vec<Point>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepOutcome {
    pub point: Point,
    pub set: Vec<Point>,
    pub slack_used: f64,
}

pub struct Solver<'a> {
    problem: &'a Problem,
    gauge: &'a GaugeFunction,
    schedule: &'a Schedule,
}

impl<'a> Solver<'a> {
    pub fn new(problem: &'a Problem, gauge: &'a GaugeFunction, schedule: &'a Schedule) -> Self {
        Solver { problem, gauge, schedule }
    }

    fn rho(&self, x: Point, y: Point) -> ExtReal {
        self.gauge.eval(&self.problem.space, x, y)
    }

    /// `S_0 = {x : f(x) + δ_0 ρ(x, x0) ≤ f(x0)}`.
    pub fn build_s0(&self, delta0: f64) -> Vec<Point> {
        let pr = self.problem;
        let f0 = pr.f0();
        let set: Vec<Point> = pr
            .space
            .points()
            .filter(|&x| (pr.f(x) + self.rho(x, pr.x0).scale(delta0)).value() <= f0)
            .collect();
        assert!(set.contains(&pr.x0), "x0 must belong to S_0");
        set
    }

    /// `f(x) + Σ_{k<j} δ_k ρ(x, x_k)`.
    fn objective(&self, x: Point, points: &[Point], j: usize) -> ExtReal {
        let mut v = self.problem.f(x);
        for (k, &xk) in points.iter().enumerate().take(j) {
            v = v + self.rho(x, xk).scale(self.schedule.delta(k));
        }
        v
    }

    /// One selection-and-shrink step for index `i ≥ 1`.
    pub fn step(&self, i: usize, state: &StepState, oracle: &mut dyn Oracle) -> Result<StepOutcome> {
        assert!(i >= 1 && state.points.len() == i, "state must hold x_0 .. x_(i-1)");
        if state.set.is_empty() {
            return Err(Error::OracleViolation { step: i, reason: "S_(i-1) is empty".into() });
        }
        let j = self.schedule.j(i);
        let delta_j = self.schedule.delta(j);
        let allowance = delta_j * self.schedule.eps(i);
        let points = &state.points;
        let objective = |x: Point| self.objective(x, points, j);

        let sel = oracle.minimize(&state.set, &objective, allowance).map_err(|e| match e {
            Error::OracleViolation { reason, .. } => Error::OracleViolation { step: i, reason },
            other => other,
        })?;
        if state.set.binary_search(&sel.point).is_err() {
            return Err(Error::OracleViolation {
                step: i,
                reason: format!("point {} is not in S_{}", sel.point, i - 1),
            });
        }
        if !(sel.slack_bound >= 0.0 && sel.slack_bound <= allowance) {
            return Err(Error::OracleViolation {
                step: i,
                reason: format!("reported slack {} outside [0, {allowance}]", sel.slack_bound),
            });
        }
        let inf = state.set.iter().map(|&x| objective(x)).min().expect("nonempty");
        let chosen = objective(sel.point);
        let slack_used = chosen.minus(inf);
        if !(slack_used <= allowance) {
            return Err(Error::OracleViolation {
                step: i,
                reason: format!("selection exceeds the infimum by {slack_used} > {allowance}"),
            });
        }

        let xi = sel.point;
        let fi = self.problem.f(xi).value();
        let rho_i: Vec<f64> = points.iter().take(j).map(|&xk| self.rho(xi, xk).value()).collect();
        let set: Vec<Point> = state
            .set
            .iter()
            .copied()
            .filter(|&x| {
                let fx = self.problem.f(x);
                let r = self.rho(x, xi);
                if !fx.is_finite() || !r.is_finite() {
                    return false;
                }
                let mut lhs = fx.value() + delta_j * r.value();
                for (k, &xk) in points.iter().enumerate().take(j) {
                    let rk = self.rho(x, xk);
                    if !rk.is_finite() {
                        return false;
                    }
                    lhs += self.schedule.delta(k) * (rk.value() - rho_i[k]);
                }
                lhs <= fi
            })
            .collect();
        debug_assert!(set.binary_search(&xi).is_ok());
        Ok(StepOutcome { point: xi, set, slack_used })
    }

    fn converged(&self, radius: f64) -> bool {
        self.gauge.modulus(self.schedule.tol_d / 2.0) >= radius
    }

    /// Runs the construction to termination.
    pub fn run(&self, oracle: &mut dyn Oracle) -> Result<RunResult> {
        let pr = self.problem;
        let sch = self.schedule;
        sch.check_shape()?;
        let delta0 = sch.delta0();
        let s0 = self.build_s0(delta0);
        let mut iterates = vec![Iterate {
            index: 0,
            point: pr.x0,
            j: 0,
            value: pr.f0(),
            set_size: s0.len(),
            members: s0,
            eps: pr.epsilon / delta0,
            delta_j: delta0,
            slack_used: 0.0,
        }];
        let mut state = StepState { points: vec![pr.x0], set: iterates[0].members.clone() };

        let mut status = self.status_after(&iterates[0], 0);
        let mut i = 0;
        while status.is_none() {
            i += 1;
            let out = self.step(i, &state, oracle)?;
            let j = sch.j(i);
            let it = Iterate {
                index: i,
                point: out.point,
                j,
                value: pr.f(out.point).value(),
                set_size: out.set.len(),
                members: out.set,
                eps: sch.eps(i),
                delta_j: sch.delta(j),
                slack_used: out.slack_used,
            };
            state.points.push(it.point);
            state.set = it.members.clone();
            status = self.status_after(&it, i);
            iterates.push(it);
        }
        let status = status.expect("loop exits with a status");

        let last = iterates.last().expect("x0 recorded");
        let xbar = last.point;
        let final_diam_bound = if last.set_size == 1 {
            0.0
        } else {
            2.0 * last.members.iter().map(|&x| pr.space.distance(x, xbar)).fold(0.0, f64::max)
        };
        let points: Vec<Point> = iterates.iter().map(|it| it.point).collect();
        let rho_chain = points.windows(2).map(|w| self.rho(w[1], w[0]).value()).collect();
        let rho_to_limit = points.iter().map(|&x| self.rho(xbar, x).value()).collect();
        Ok(RunResult {
            xbar,
            trace: Trace { iterates, rho_chain, rho_to_limit },
            status,
            final_diam_bound,
        })
    }

    fn status_after(&self, it: &Iterate, i: usize) -> Option<Status> {
        if it.set_size == 1 {
            Some(Status::SingletonEarly)
        } else if self.converged(it.eps) {
            Some(Status::Converged)
        } else if i >= self.schedule.cap {
            Some(Status::CapReached)
        } else {
            None
        }
    }
}

/// Convenience wrapper around [`Solver::run`].
pub fn run(
    problem: &Problem,
    gauge: &GaugeFunction,
    schedule: &Schedule,
    oracle: &mut dyn Oracle,
) -> Result<RunResult> {
    Solver::new(problem, gauge, schedule).run(oracle)
}
