//! High-cost pipeline: guess the placement of a small sample, solve the
//! sampled LP for each guess, round, and keep the candidate with the
//! smallest sampled cost. Also the MFAST dispatch.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bucket::{extend_to_permutation, BucketOrder, SampleEnsemble, SampledRelations};
use crate::constants::{Constants, HighCostSizes};
use crate::error::{Error, Result};
use crate::exact::{best_order, DenseRelation};
use crate::instances::{Clustering, MultiSample, PairOracle, Permutation};
use crate::lp::{
    build_cached, hardwire, repair_balance, round_lp, solve_lp_lazy, LpError, LpInputs,
};
use crate::par::map_range;
use crate::problem::{estimate_pair_cost, Problem};
use crate::report::{stopwatch, Branch, LevelRecord, SolveReport, SolveStatus};
use crate::rng::{derive_seed, stream_rng, Stream};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlanMode {
    /// Every placement of the distinct sample vertices.
    Exhaustive,
    /// The true placement restricted to the sample, plus random decoys.
    /// `truth[v]` is the slot of vertex `v`.
    OracleSeeded { truth: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationPlan {
    pub mode: PlanMode,
    /// Maximum number of guesses.
    pub budget: usize,
    /// Overrides the sizes derived from the constants.
    pub sizes: Option<HighCostSizes>,
}

impl EnumerationPlan {
    pub fn exhaustive(budget: usize) -> Self {
        EnumerationPlan {
            mode: PlanMode::Exhaustive,
            budget,
            sizes: None,
        }
    }

    pub fn oracle_seeded(truth: Vec<usize>, budget: usize) -> Self {
        EnumerationPlan {
            mode: PlanMode::OracleSeeded { truth },
            budget,
            sizes: None,
        }
    }

    pub fn with_sizes(mut self, sizes: HighCostSizes) -> Self {
        self.sizes = Some(sizes);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CandidateStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateRecord {
    pub guess_id: usize,
    /// Slots of the distinct sample vertices, in increasing id order.
    pub guess: Vec<usize>,
    pub status: CandidateStatus,
    pub lp_objective: Option<f64>,
    /// Slot of every vertex after rounding (and repair, for MFAST).
    pub solution: Option<Vec<usize>>,
    pub repair_moves: usize,
    /// Ensemble estimate of the candidate's cost; the selection key.
    pub score: Option<f64>,
    /// Left empty by the pipeline; filled by callers holding the full instance.
    pub exact_cost: Option<u64>,
}

/// Everything a high-cost run produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HighCostRun {
    pub sizes: HighCostSizes,
    pub slots: usize,
    pub sample: MultiSample,
    pub ensemble: SampleEnsemble,
    pub candidates: Vec<CandidateRecord>,
    pub selected: usize,
}

impl HighCostRun {
    pub fn selected_solution(&self) -> &[usize] {
        self.candidates[self.selected]
            .solution
            .as_deref()
            .expect("selected candidate is feasible")
    }
}

/// Low-cost MFAST solver used by [`dispatch_mfast`]. `Ok(None)` means the
/// instance is beyond what the solver handles.
pub trait LowCostMfast {
    fn solve(&self, oracle: &dyn PairOracle, constants: &Constants) -> Result<Option<Permutation>>;
}

/// Exact subset DP over a fully queried instance, up to `mfast_cap` vertices.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExactLowMfast;

impl LowCostMfast for ExactLowMfast {
    fn solve(&self, oracle: &dyn PairOracle, constants: &Constants) -> Result<Option<Permutation>> {
        let n = oracle.len();
        if n > constants.mfast_cap() {
            return Ok(None);
        }
        let all: Vec<usize> = (0..n).collect();
        let d = DenseRelation::from_oracle(oracle, Problem::Mfast, &all, vec![1; n]);
        let (order, _) = best_order(&d, constants.mfast_cap())?;
        Ok(Some(Permutation::from_order(order)?))
    }
}

/// Number of guesses an exhaustive plan enumerates over `d` sample vertices.
pub fn guess_count(problem: Problem, d: usize, slots: usize) -> f64 {
    match problem {
        Problem::Mfast => (slots as f64).powi(d as i32),
        Problem::Kcc => {
            // set partitions of d items into at most `slots` blocks
            let mut row = vec![0.0f64; slots + 1];
            row[0] = 1.0;
            for _ in 0..d {
                let mut next = vec![0.0; slots + 1];
                for j in 1..=slots {
                    next[j] = j as f64 * row[j] + row[j - 1];
                }
                row = next;
            }
            row.iter().sum()
        }
    }
}

/// Guesses of the plan over `d` distinct sample vertices `verts`.
pub fn enumerate_guesses(
    problem: Problem,
    verts: &[usize],
    slots: usize,
    plan: &EnumerationPlan,
    seed: u64,
) -> Result<Vec<Vec<usize>>> {
    let d = verts.len();
    match &plan.mode {
        PlanMode::Exhaustive => {
            let needed = guess_count(problem, d, slots);
            if needed > plan.budget as f64 {
                return Err(Error::PlanBudget {
                    needed,
                    budget: plan.budget,
                });
            }
            let mut out = Vec::with_capacity(needed as usize);
            let mut cur = vec![0usize; d];
            enumerate_rec(problem, slots, 0, 0, &mut cur, &mut out);
            Ok(out)
        }
        PlanMode::OracleSeeded { truth } => {
            if plan.budget == 0 {
                return Err(Error::PlanBudget {
                    needed: 1.0,
                    budget: 0,
                });
            }
            let mut out = vec![verts.iter().map(|&v| truth[v]).collect::<Vec<_>>()];
            if out[0].iter().any(|&j| j >= slots) {
                return Err(Error::InvalidArgument("truth slot out of range".into()));
            }
            let mut rng = stream_rng(seed, Stream::Decoys);
            while out.len() < plan.budget {
                out.push((0..d).map(|_| rng.random_range(0..slots)).collect());
            }
            Ok(out)
        }
    }
}

fn enumerate_rec(
    problem: Problem,
    slots: usize,
    i: usize,
    used: usize,
    cur: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if i == cur.len() {
        out.push(cur.clone());
        return;
    }
    // k-CC guesses are canonical: a new label is the next unused one
    let limit = match problem {
        Problem::Mfast => slots,
        Problem::Kcc => (used + 1).min(slots),
    };
    for j in 0..limit {
        cur[i] = j;
        enumerate_rec(problem, slots, i + 1, used.max(j + 1), cur, out);
    }
}

/// Shared pipeline over `slots` slots (buckets or clusters).
#[allow(clippy::too_many_arguments)]
pub fn high_cost_run<O: PairOracle + ?Sized>(
    oracle: &O,
    problem: Problem,
    slots: usize,
    eps: f64,
    gamma: f64,
    constants: &Constants,
    plan: &EnumerationPlan,
    seed: u64,
) -> Result<HighCostRun> {
    let n = oracle.len();
    if n == 0 || slots == 0 || eps.is_nan() || eps <= 0.0 || gamma.is_nan() || gamma <= 0.0 {
        return Err(Error::InvalidArgument(
            "high-cost run needs n, slots, eps, gamma > 0".into(),
        ));
    }
    let sizes = plan
        .sizes
        .unwrap_or_else(|| constants.high_cost_sizes(problem, n, eps, gamma));
    let mut rng = stream_rng(seed, Stream::EnumerationSample);
    let sample = MultiSample {
        items: (0..sizes.s).map(|_| rng.random_range(0..n)).collect(),
        seed,
    };
    let ensemble = SampleEnsemble::draw(n, sizes.p, derive_seed(seed, 1))?;
    let (verts, _) = sample.distinct();
    let guesses = enumerate_guesses(problem, &verts, slots, plan, derive_seed(seed, 2))?;

    let sample_rel = SampledRelations::read(oracle, vec![sample.items.clone(); n]);
    let ensemble_rel = SampledRelations::read(oracle, ensemble.per_vertex.clone());
    let inputs = LpInputs {
        problem,
        sample: &sample,
        sample_rel: &sample_rel,
        ensemble: &ensemble,
        ensemble_rel: &ensemble_rel,
        slots,
        half_width: constants.crux_half_width(eps, gamma, n, sizes.s, sizes.p),
    };
    let score_scale = n as f64 / (2.0 * sizes.p as f64);

    let candidates: Vec<CandidateRecord> = map_range(guesses.len(), |id| {
        let guess = guesses[id].clone();
        let mut rec = CandidateRecord {
            guess_id: id,
            guess,
            status: CandidateStatus::Optimal,
            lp_objective: None,
            solution: None,
            repair_moves: 0,
            score: None,
            exact_cost: None,
        };
        let fixed = hardwire(n, &sample, &rec.guess, slots).expect("guess matches the sample");
        let model = build_cached(&inputs, fixed);
        match solve_lp_lazy(&model) {
            Ok(x) => {
                rec.lp_objective = Some(x.objective_value);
                let mut sol = round_lp(&model, &x, derive_seed(seed, 1000 + id as u64));
                if problem == Problem::Mfast {
                    let (sigma, moves) = repair_balance(slots, &sol).expect("slots in range");
                    sol = sigma.buckets().to_vec();
                    rec.repair_moves = moves;
                }
                rec.score = Some(ensemble_rel.total(problem, &sol, score_scale));
                rec.solution = Some(sol);
            }
            Err(e) => {
                rec.status = match e {
                    LpError::Infeasible => CandidateStatus::Infeasible,
                    LpError::Unbounded => CandidateStatus::Unbounded,
                    LpError::IterationLimit(_) => CandidateStatus::IterationLimit,
                };
            }
        }
        rec
    });

    let selected = candidates
        .iter()
        .filter_map(|c| c.score.map(|s| (s, c.guess_id)))
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
        .map(|(_, id)| id)
        .ok_or(Error::NoFeasibleCandidate)?;
    Ok(HighCostRun {
        sizes,
        slots,
        sample,
        ensemble,
        candidates,
        selected,
    })
}

/// High-cost MFAST: a balanced bucketing over `m` buckets, extended to a
/// permutation by vertex id inside each bucket.
pub fn mfast_high_ptas<O: PairOracle + ?Sized>(
    oracle: &O,
    eps: f64,
    gamma: f64,
    constants: &Constants,
    plan: &EnumerationPlan,
    seed: u64,
) -> Result<(Permutation, BucketOrder, HighCostRun)> {
    let n = oracle.len();
    let m = plan
        .sizes
        .map_or_else(
            || constants.high_cost_sizes(Problem::Mfast, n, eps, gamma).m,
            |s| s.m,
        )
        .min(n)
        .max(1);
    let run = high_cost_run(oracle, Problem::Mfast, m, eps, gamma, constants, plan, seed)?;
    let sigma = BucketOrder::new(m, run.selected_solution().to_vec())?;
    Ok((extend_to_permutation(&sigma), sigma, run))
}

pub fn kcc_high_ptas<O: PairOracle + ?Sized>(
    oracle: &O,
    k: usize,
    eps: f64,
    gamma: f64,
    constants: &Constants,
    plan: &EnumerationPlan,
    seed: u64,
) -> Result<(Clustering, HighCostRun)> {
    let run = high_cost_run(oracle, Problem::Kcc, k, eps, gamma, constants, plan, seed)?;
    Ok((Clustering::new(k, run.selected_solution().to_vec())?, run))
}

/// Runs the high-cost pipeline with `P(eps)`, keeps it when its estimated
/// cost is at least `P(eps) n^2`, otherwise hands over to `low`.
pub fn dispatch_mfast<O: PairOracle>(
    oracle: &O,
    eps: f64,
    constants: &Constants,
    low: &dyn LowCostMfast,
    seed: u64,
) -> Result<(Option<Permutation>, SolveReport)> {
    let n = oracle.len();
    if n == 0 || eps.is_nan() || eps <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "need n >= 1 and eps > 0; got n={n}, eps={eps}"
        )));
    }
    let elapsed_ms = stopwatch();
    let before = oracle.queries();
    let mut rec = LevelRecord::new(0, n, 1, eps, Branch::Low);
    let mut report = SolveReport {
        problem: Problem::Mfast,
        n,
        k: None,
        eps,
        status: SolveStatus::Solved,
        branch: Branch::Low,
        cost_exact: None,
        cost_estimate: None,
        queries_raw: 0,
        queries_dedup: 0,
        seed,
        wall_ms: 0.0,
        trace: Vec::new(),
    };
    let mut answer = None;
    if n <= 1 {
        rec.branch = Branch::Trivial;
        answer = Some(Permutation::identity(n));
    } else {
        let gamma = constants.p_threshold(eps);
        let plan = EnumerationPlan::exhaustive(constants.guess_budget as usize);
        match mfast_high_ptas(oracle, eps, gamma, constants, &plan, derive_seed(seed, 1)) {
            Ok((pi, _, _)) => {
                let q = constants.cost_sample_size(n, constants.tau_ratio * gamma);
                let estimate =
                    estimate_pair_cost(oracle, Problem::Mfast, pi.ranks(), q, derive_seed(seed, 2));
                let threshold = gamma * (n * n) as f64;
                rec.high_estimate = Some(estimate);
                rec.threshold = Some(threshold);
                if estimate >= threshold {
                    rec.branch = Branch::High;
                    answer = Some(pi);
                }
            }
            Err(Error::PlanBudget { .. } | Error::NoFeasibleCandidate) => {}
            Err(e) => return Err(e),
        }
        if answer.is_none() {
            answer = low.solve(oracle, constants)?;
            if answer.is_none() {
                report.status = SolveStatus::UnsupportedScale;
            }
        }
    }
    let used = oracle.queries().since(before);
    rec.queries = oracle.queries();
    report.branch = rec.branch;
    report.cost_estimate = rec.high_estimate;
    report.queries_raw = used.raw;
    report.queries_dedup = used.dedup;
    report.trace.push(rec);
    report.wall_ms = elapsed_ms();
    Ok((answer, report))
}
