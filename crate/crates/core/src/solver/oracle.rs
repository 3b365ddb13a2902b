//! Inner minimization oracles for the selection step.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::spaces::{MetricSpace, Point};

/// Largest space the exhaustive oracle will scan.
pub const EXHAUSTIVE_BUDGET: usize = 10_000_000;

/// A point returned by an oracle together with the oracle's own claim on
/// how far its objective value may exceed the feasible infimum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Selection {
    pub point: Point,
    pub slack_bound: f64,
}

/// Approximate minimization over an explicit feasible set.
///
/// `allowance` is the additive slack the caller tolerates; an oracle may
/// use any part of it. `feasible` is sorted ascending and nonempty.
pub trait Oracle {
    fn minimize(
        &mut self,
        feasible: &[Point],
        objective: &dyn Fn(Point) -> ExtReal,
        allowance: f64,
    ) -> Result<Selection>;
}

fn scan_min(feasible: &[Point], objective: &dyn Fn(Point) -> ExtReal) -> (Point, ExtReal) {
    let mut best = (feasible[0], objective(feasible[0]));
    for &p in &feasible[1..] {
        let v = objective(p);
        if v < best.1 {
            best = (p, v);
        }
    }
    best
}

/// Full scan; ties go to the lowest point id. Always reports zero slack.
#[derive(Clone, Debug, Default)]
pub struct ExhaustiveOracle;

impl ExhaustiveOracle {
    pub fn new(space: &MetricSpace) -> Result<Self> {
        if space.len() > EXHAUSTIVE_BUDGET {
            return Err(Error::OracleBudget { points: space.len(), limit: EXHAUSTIVE_BUDGET });
        }
        Ok(ExhaustiveOracle)
    }
}

impl Oracle for ExhaustiveOracle {
    fn minimize(
        &mut self,
        feasible: &[Point],
        objective: &dyn Fn(Point) -> ExtReal,
        _allowance: f64,
    ) -> Result<Selection> {
        if feasible.is_empty() {
            return Err(Error::OracleViolation { step: 0, reason: "empty feasible set".into() });
        }
        Ok(Selection { point: scan_min(feasible, objective).0, slack_bound: 0.0 })
    }
}

/// Deliberately inexact oracle: returns a seeded random feasible point
/// whose value is within `fraction · allowance` of the feasible infimum.
#[derive(Clone, Debug)]
pub struct SlackOracle {
    rng: ChaCha8Rng,
    fraction: f64,
}

impl SlackOracle {
    pub fn new(seed: u64, fraction: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&fraction) {
            return Err(Error::InvalidParameter(format!("slack fraction {fraction} outside [0, 1]")));
        }
        Ok(SlackOracle { rng: ChaCha8Rng::seed_from_u64(seed), fraction })
    }
}

impl Oracle for SlackOracle {
    fn minimize(
        &mut self,
        feasible: &[Point],
        objective: &dyn Fn(Point) -> ExtReal,
        allowance: f64,
    ) -> Result<Selection> {
        if feasible.is_empty() {
            return Err(Error::OracleViolation { step: 0, reason: "empty feasible set".into() });
        }
        let (_, min) = scan_min(feasible, objective);
        let limit = min + self.fraction * allowance;
        let candidates: Vec<(Point, ExtReal)> = feasible
            .iter()
            .map(|&p| (p, objective(p)))
            .filter(|&(_, v)| v <= limit)
            .collect();
        let (point, v) = candidates[self.rng.gen_range(0..candidates.len())];
        Ok(Selection { point, slack_bound: v.minus(min) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3(p: Point) -> ExtReal {
        [1.0, 0.2, 0.0].map(ExtReal::finite)[p]
    }

    #[test]
    fn exhaustive_picks_minimum() {
        let mut o = ExhaustiveOracle;
        assert_eq!(o.minimize(&[0, 1, 2], &f3, 0.0).unwrap(), Selection { point: 2, slack_bound: 0.0 });
        assert_eq!(o.minimize(&[1], &f3, 0.0).unwrap().point, 1);
    }

    #[test]
    fn exhaustive_ties_go_to_lowest_index() {
        let f = |p: Point| ExtReal::finite([0.0, 0.0, 1.0][p]);
        assert_eq!(ExhaustiveOracle.minimize(&[0, 1, 2], &f, 0.0).unwrap().point, 0);
    }

    #[test]
    fn exhaustive_budget() {
        let big = MetricSpace::box_grid(vec![0.0, 0.0], vec![1.0, 1.0], vec![1e-4, 1e-3]).unwrap();
        assert!(matches!(ExhaustiveOracle::new(&big), Err(Error::OracleBudget { .. })));
    }

    #[test]
    fn slack_oracle_stays_within_allowance() {
        let mut o = SlackOracle::new(1, 0.9).unwrap();
        for _ in 0..50 {
            let s = o.minimize(&[0, 1, 2], &f3, 0.5).unwrap();
            assert!(s.point != 0);
            assert!(s.slack_bound <= 0.45);
        }
        assert!(SlackOracle::new(0, 1.5).is_err());
    }
}
