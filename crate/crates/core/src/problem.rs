use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::instances::{num_pairs, PairOracle};
use crate::rng::{stream_rng, Stream};

/// Which objective a slot assignment is scored against.
///
/// Slots are buckets for MFAST and cluster indices for k-CC. `rel` is the
/// oracle relation of the ordered pair `(u, v)`: `u -> v` or "is an edge".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    Kcc,
    Mfast,
}

impl Problem {
    /// Disagreement of the pair `(u, v)` when `u` sits in slot `a` and `v` in slot `b`.
    #[inline]
    pub fn pair_cost(self, a: usize, b: usize, rel: bool) -> bool {
        match self {
            Problem::Mfast => (a < b && !rel) || (b < a && rel),
            Problem::Kcc => (a == b) != rel,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Problem::Kcc => "kcc",
            Problem::Mfast => "mfast",
        }
    }
}

/// Estimates `sum_{u<v} pair_cost(slot(u), slot(v))` from `q` uniform pairs
/// drawn with repetition, or exactly when `q` reaches the number of pairs.
pub(crate) fn estimate_pair_cost<O: PairOracle + ?Sized>(
    oracle: &O,
    problem: Problem,
    slots: &[usize],
    q: f64,
    seed: u64,
) -> f64 {
    let n = oracle.len();
    let total = num_pairs(n);
    if total == 0 {
        return 0.0;
    }
    if q >= total as f64 {
        let mut cost = 0u64;
        for v in 1..n {
            for u in 0..v {
                cost += problem.pair_cost(slots[u], slots[v], oracle.relation(u, v)) as u64;
            }
        }
        return cost as f64;
    }
    let q = q.max(1.0) as usize;
    let mut rng = stream_rng(seed, Stream::CostEstimate);
    let mut bad = 0u64;
    for _ in 0..q {
        let u = rng.random_range(0..n);
        let mut v = rng.random_range(0..n - 1);
        if v >= u {
            v += 1;
        }
        bad += problem.pair_cost(slots[u], slots[v], oracle.relation(u, v)) as u64;
    }
    total as f64 * bad as f64 / q as f64
}
