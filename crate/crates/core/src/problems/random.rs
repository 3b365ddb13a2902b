//! Seeded random finite metric spaces: shortest-path metrics of random
//! connected weighted graphs, so the triangle inequality holds by
//! construction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ext::ExtReal;
use crate::spaces::MetricSpace;

use super::Problem;

#[derive(Clone, Debug, PartialEq)]
pub struct RandomConfig {
    pub min_points: usize,
    pub max_points: usize,
    /// Probability of each extra (non-tree) edge.
    pub edge_prob: f64,
    /// Probability that a point other than `x0` gets `f = +∞`.
    pub inf_prob: f64,
}

impl Default for RandomConfig {
    fn default() -> Self {
        RandomConfig { min_points: 4, max_points: 40, edge_prob: 0.15, inf_prob: 0.1 }
    }
}

/// Edge weights and objective values are dyadic rationals, so path sums
/// and most certificate arithmetic stay exact in binary floating point.
fn dyadic(rng: &mut ChaCha8Rng, lo: u32, hi: u32, denom: f64) -> f64 {
    rng.gen_range(lo..=hi) as f64 / denom
}

/// Shortest-path metric of a random connected graph on `n` points.
pub fn random_metric_space(rng: &mut ChaCha8Rng, n: usize, edge_prob: f64) -> MetricSpace {
    assert!(n >= 1);
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    // random spanning tree keeps the graph connected
    for i in 1..n {
        let j = rng.gen_range(0..i);
        let w = dyadic(rng, 8, 128, 64.0);
        d[i][j] = w;
        d[j][i] = w;
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen_bool(edge_prob) {
                let w = dyadic(rng, 8, 128, 64.0);
                if w < d[i][j] {
                    d[i][j] = w;
                    d[j][i] = w;
                }
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    MetricSpace::finite(d).expect("shortest-path completion is a metric")
}

/// A random problem whose `ε` satisfies `f(x0) ≤ inf f + ε` strictly.
pub fn random_problem(seed: u64, cfg: &RandomConfig) -> Problem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(cfg.min_points..=cfg.max_points.min(super::corpus::RANDOM_MAX_POINTS));
    let space = random_metric_space(&mut rng, n, cfg.edge_prob);
    let x0 = rng.gen_range(0..n);
    let values: Vec<ExtReal> = (0..n)
        .map(|i| {
            if i != x0 && rng.gen_bool(cfg.inf_prob) {
                ExtReal::INFINITY
            } else {
                ExtReal::finite(dyadic(&mut rng, 0, 160, 32.0))
            }
        })
        .collect();
    let inf = values.iter().copied().min().expect("nonempty").value();
    let epsilon = values[x0].value() - inf + dyadic(&mut rng, 1, 32, 32.0);
    Problem::new(format!("RANDOM-{seed}"), space, values, x0, epsilon).expect("valid random problem")
}
