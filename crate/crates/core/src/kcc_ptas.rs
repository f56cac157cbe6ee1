//! Low-cost k-CC scheme: assign every vertex to its cheapest estimated
//! cluster, freeze the large clusters and recurse on the rest; plus the
//! dispatch between the low- and high-cost regimes.

use serde::{Deserialize, Serialize};

use crate::constants::Constants;
use crate::error::{Error, Result};
use crate::estimator::{estimate_vertex_costs, CostTable};
use crate::exact::{best_clustering, DenseRelation};
use crate::high_cost::{kcc_high_ptas, EnumerationPlan};
use crate::instances::{Clustering, PairOracle, Restricted};
use crate::problem::{estimate_pair_cost, Problem};
use crate::report::{stopwatch, Branch, LevelRecord, SolveReport, SolveStatus};
use crate::rng::derive_seed;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RecursionTrace {
    pub levels: Vec<LevelRecord>,
}

/// Outcome of one assignment step of the low-cost scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreezeStep {
    /// Estimator argmin cluster of every vertex.
    pub assign: Vec<usize>,
    /// Cluster ids by decreasing size (stable on ties).
    pub ranked: Vec<usize>,
    pub sizes: Vec<usize>,
    /// Number of leading clusters with at least `n / 2k` vertices.
    pub ell: usize,
}

pub fn freeze_step(table: &CostTable) -> FreezeStep {
    let (n, k) = (table.n, table.k);
    let assign: Vec<usize> = (0..n).map(|v| table.argmin(v)).collect();
    let mut count = vec![0usize; k];
    for &j in &assign {
        count[j] += 1;
    }
    let mut ranked: Vec<usize> = (0..k).collect();
    ranked.sort_by_key(|&j| std::cmp::Reverse(count[j]));
    let sizes: Vec<usize> = ranked.iter().map(|&j| count[j]).collect();
    let ell = sizes.iter().take_while(|&&s| 2 * k * s >= n).count();
    FreezeStep {
        assign,
        ranked,
        sizes,
        ell,
    }
}

/// Vertices whose cheapest estimated cost is at least `c3 n / k^2`.
pub fn costly_set(table: &CostTable, c3: f64) -> Vec<usize> {
    let threshold = c3 * table.n as f64 / (table.k * table.k) as f64;
    (0..table.n)
        .filter(|&v| table.min(v) >= threshold)
        .collect()
}

/// Pair-sampling estimate of `kcc_cost(c)` with additive target `tau * n^2`.
pub fn estimate_solution_cost<O: PairOracle + ?Sized>(
    oracle: &O,
    c: &Clustering,
    tau: f64,
    constants: &Constants,
    seed: u64,
) -> f64 {
    let q = constants.cost_sample_size(oracle.len(), tau);
    estimate_pair_cost(oracle, Problem::Kcc, c.assignment(), q, seed)
}

/// Low-cost scheme alone (no high-cost test at any level).
pub fn kcc_low_ptas<O: PairOracle + ?Sized>(
    oracle: &O,
    k: usize,
    eps: f64,
    constants: &Constants,
    seed: u64,
) -> Result<(Clustering, RecursionTrace)> {
    check_args(oracle.len(), k, eps)?;
    let mut trace = RecursionTrace::default();
    let verts: Vec<usize> = (0..oracle.len()).collect();
    let labels = solve_level(oracle, verts, k, eps, constants, seed, 0, false, &mut trace)?;
    Ok((Clustering::new(k, labels)?, trace))
}

/// Runs the high-cost pipeline, estimates its cost, and keeps it when the
/// estimate clears `Q(eps, k) n^2`; otherwise takes one low-cost step and
/// recurses, testing again at every level.
pub fn dispatch_kcc<O: PairOracle + ?Sized>(
    oracle: &O,
    k: usize,
    eps: f64,
    constants: &Constants,
    seed: u64,
) -> Result<(Clustering, SolveReport)> {
    check_args(oracle.len(), k, eps)?;
    let elapsed_ms = stopwatch();
    let before = oracle.queries();
    let mut trace = RecursionTrace::default();
    let verts: Vec<usize> = (0..oracle.len()).collect();
    let labels = solve_level(oracle, verts, k, eps, constants, seed, 0, true, &mut trace)?;
    let used = oracle.queries().since(before);
    let top = trace.levels.first().expect("at least one level");
    let report = SolveReport {
        problem: Problem::Kcc,
        n: oracle.len(),
        k: Some(k),
        eps,
        status: SolveStatus::Solved,
        branch: top.branch,
        cost_exact: None,
        cost_estimate: top.high_estimate,
        queries_raw: used.raw,
        queries_dedup: used.dedup,
        seed,
        wall_ms: elapsed_ms(),
        trace: trace.levels,
    };
    Ok((Clustering::new(k, labels)?, report))
}

fn check_args(n: usize, k: usize, eps: f64) -> Result<()> {
    if k == 0 || eps.is_nan() || eps <= 0.0 || n == 0 {
        return Err(Error::InvalidArgument(format!(
            "need n >= 1, k >= 1, eps > 0; got n={n}, k={k}, eps={eps}"
        )));
    }
    Ok(())
}

/// Labels in `0..k` for `verts` (ids of the root oracle). Every level views
/// the root oracle directly, so counters accumulate across the recursion.
#[allow(clippy::too_many_arguments)]
fn solve_level<O: PairOracle + ?Sized>(
    root: &O,
    verts: Vec<usize>,
    k: usize,
    eps: f64,
    constants: &Constants,
    seed: u64,
    depth: usize,
    dispatch: bool,
    trace: &mut RecursionTrace,
) -> Result<Vec<usize>> {
    let n = verts.len();
    let view = Restricted::new(root, verts);
    if k == 1 || n <= 1 {
        let mut rec = LevelRecord::new(depth, n, k, eps, Branch::Trivial);
        rec.queries = root.queries();
        trace.levels.push(rec);
        return Ok(vec![0; n]);
    }
    if n <= constants.base_n() {
        let d = DenseRelation::from_oracle(
            &view,
            Problem::Kcc,
            &(0..n).collect::<Vec<_>>(),
            vec![1; n],
        );
        let (labels, _) = best_clustering(&d, k, constants.brute_force_bits)?;
        let mut rec = LevelRecord::new(depth, n, k, eps, Branch::Exact);
        rec.queries = root.queries();
        trace.levels.push(rec);
        return Ok(labels);
    }

    let mut rec = LevelRecord::new(depth, n, k, eps, Branch::Low);
    if dispatch {
        let gamma = constants.q_threshold(eps, k);
        let plan = EnumerationPlan::exhaustive(constants.guess_budget as usize);
        match kcc_high_ptas(&view, k, eps, gamma, constants, &plan, derive_seed(seed, 1)) {
            Ok((high, _)) => {
                let tau = constants.tau_ratio * gamma;
                let estimate =
                    estimate_solution_cost(&view, &high, tau, constants, derive_seed(seed, 2));
                let threshold = gamma * (n * n) as f64;
                rec.high_estimate = Some(estimate);
                rec.threshold = Some(threshold);
                if estimate >= threshold {
                    rec.branch = Branch::High;
                    rec.queries = root.queries();
                    trace.levels.push(rec);
                    return Ok(high.assignment().to_vec());
                }
            }
            Err(Error::PlanBudget { .. } | Error::NoFeasibleCandidate) => {}
            Err(e) => return Err(e),
        }
    }

    let beta = constants.beta(eps, k);
    let table = estimate_vertex_costs(&view, k, beta, constants, derive_seed(seed, 3))?;
    let step = freeze_step(&table);
    rec.beta = Some(beta);
    rec.sample_size = Some(table.sample.len());
    rec.ell = Some(step.ell);
    rec.sizes.clone_from(&step.sizes);

    let mut rank_of = vec![0; k];
    for (r, &j) in step.ranked.iter().enumerate() {
        rank_of[j] = r;
    }
    let mut labels: Vec<usize> = step.assign.iter().map(|&j| rank_of[j]).collect();
    let rest: Vec<usize> = (0..n).filter(|&v| labels[v] >= step.ell).collect();
    rec.queries = root.queries();
    trace.levels.push(rec);
    if rest.is_empty() {
        return Ok(labels);
    }
    let sub_verts: Vec<usize> = rest.iter().map(|&v| view.vertices()[v]).collect();
    let sub_eps = eps * (1.0 - 1.0 / k as f64);
    let sub = solve_level(
        root,
        sub_verts,
        k - step.ell,
        sub_eps,
        constants,
        derive_seed(seed, 4),
        depth + 1,
        dispatch,
        trace,
    )?;
    for (&v, l) in rest.iter().zip(sub) {
        labels[v] = step.ell + l;
    }
    Ok(labels)
}
