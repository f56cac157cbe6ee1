//! Query-efficient approximation schemes for k-correlation clustering (k-CC)
//! and minimum feedback arc set in tournaments (MFAST).
//!
//! All algorithm modules read their input only through [`PairOracle`], whose
//! query counters make the sublinear query complexity measurable. The
//! [`oracles`] module holds exact cost functions and brute-force solvers used
//! as ground truth.

pub mod bucket;
pub mod constants;
pub mod error;
pub mod estimator;
mod exact;
pub mod high_cost;
pub mod instances;
pub mod kcc_ptas;
pub mod lp;
pub mod oracles;
mod par;
mod problem;
pub mod report;
mod rng;

pub use bucket::{BalanceMode, BucketOrder, SampleEnsemble};
pub use constants::{Constants, HighCostSizes};
pub use error::{Error, ParseError, Result};
pub use estimator::{
    align_clusterings, draw_sample, estimate_vertex_costs, ClusterAlignment, CostTable,
};
pub use high_cost::{
    dispatch_mfast, kcc_high_ptas, mfast_high_ptas, CandidateRecord, EnumerationPlan, LowCostMfast,
    PlanMode,
};
pub use instances::{
    Clustering, Label, LabeledGraph, MultiSample, PairOracle, Permutation, QueryCount, Restricted,
    Tournament,
};
pub use kcc_ptas::{dispatch_kcc, estimate_solution_cost, kcc_low_ptas, RecursionTrace};
pub use problem::Problem;
pub use report::{Branch, SolveReport, SolveStatus};
pub use rng::derive_seed;
