//! Structured run reports.

use serde::{Deserialize, Serialize};

use crate::instances::QueryCount;
use crate::problem::Problem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// The high-cost pipeline's answer was kept.
    High,
    /// The low-cost solver ran.
    Low,
    /// Small enough to solve exactly.
    Exact,
    /// A single cluster or fewer than two vertices.
    Trivial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Solved,
    /// The low-cost branch was selected but the instance exceeds the low solver's cap.
    UnsupportedScale,
}

/// One recursion level (or the single level of an MFAST run).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub depth: usize,
    pub n: usize,
    pub k: usize,
    pub eps: f64,
    pub branch: Branch,
    /// Estimated cost of the high-cost candidate and the threshold it was held against.
    pub high_estimate: Option<f64>,
    pub threshold: Option<f64>,
    pub beta: Option<f64>,
    pub sample_size: Option<usize>,
    pub ell: Option<usize>,
    /// Sizes of the estimator's clusters, largest first.
    pub sizes: Vec<usize>,
    /// Cumulative counters of the whole run when the level finished.
    pub queries: QueryCount,
}

impl LevelRecord {
    pub(crate) fn new(depth: usize, n: usize, k: usize, eps: f64, branch: Branch) -> Self {
        LevelRecord {
            depth,
            n,
            k,
            eps,
            branch,
            high_estimate: None,
            threshold: None,
            beta: None,
            sample_size: None,
            ell: None,
            sizes: Vec::new(),
            queries: QueryCount::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub problem: Problem,
    pub n: usize,
    pub k: Option<usize>,
    pub eps: f64,
    pub status: SolveStatus,
    /// Branch taken at the top level.
    pub branch: Branch,
    /// Filled by callers that can afford the exact cost.
    pub cost_exact: Option<u64>,
    /// Pair-sampling estimate of the high-cost candidate at the top level.
    pub cost_estimate: Option<f64>,
    pub queries_raw: u64,
    pub queries_dedup: u64,
    pub seed: u64,
    pub wall_ms: f64,
    pub trace: Vec<LevelRecord>,
}

impl SolveReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Starts a timer; the returned closure reads elapsed milliseconds.
/// `wasm32-unknown-unknown` has no clock, so it reads zero there.
#[cfg(not(target_arch = "wasm32"))]
pub(crate) fn stopwatch() -> impl Fn() -> f64 {
    let start = std::time::Instant::now();
    move || start.elapsed().as_secs_f64() * 1e3
}

#[cfg(target_arch = "wasm32")]
pub(crate) fn stopwatch() -> impl Fn() -> f64 {
    || 0.0
}
