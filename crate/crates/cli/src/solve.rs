use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, ValueEnum};
use qptas::bucket::bucket_from_permutation;
use qptas::high_cost::ExactLowMfast;
use qptas::instances::{
    load_instance, parse_clustering_sidecar, parse_permutation_sidecar, sidecar_text, Instance,
};
use qptas::oracles::{kcc_cost, mfast_cost};
use qptas::{
    dispatch_kcc, dispatch_mfast, kcc_high_ptas, kcc_low_ptas, mfast_high_ptas, Branch, Constants,
    EnumerationPlan, LabeledGraph, LowCostMfast, PairOracle, Permutation, Problem, SolveReport,
    SolveStatus, Tournament,
};

use crate::{constants, write_or_print, Failure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Test the high-cost branch first, fall back to the low-cost scheme.
    Dispatch,
    /// High-cost pipeline only.
    High,
    /// Low-cost scheme only.
    Low,
}

#[derive(Args)]
pub struct SolveArgs {
    /// Instance file (`kcc n` or `mfast n` header).
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    eps: f64,
    /// Number of clusters (k-CC only).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    k: Option<u64>,
    #[arg(long)]
    seed: u64,
    #[arg(long, value_enum, default_value = "dispatch")]
    mode: Mode,
    /// Ground-truth sidecar; in high mode it seeds the guess list with the
    /// true placement of the sample.
    #[arg(long)]
    truth: Option<PathBuf>,
    /// Maximum number of guesses in high mode (default: the guess_budget constant).
    #[arg(long)]
    budget: Option<usize>,
    /// Constant override, repeatable.
    #[arg(long = "const", value_name = "NAME=VALUE")]
    consts: Vec<String>,
    /// Report path (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Writes the solution as a sidecar (cluster ids or ranks).
    #[arg(long)]
    solution: Option<PathBuf>,
}

/// Solver settings shared by `solve` and `bench`.
pub struct SolveOpts {
    pub eps: f64,
    pub k: usize,
    pub seed: u64,
    pub mode: Mode,
    pub constants: Constants,
    pub budget: usize,
    /// Planted slot or rank of every vertex.
    pub truth: Option<Vec<usize>>,
}

pub struct Solved {
    /// Cluster id or rank of every vertex.
    pub solution: Option<Vec<usize>>,
    pub report: SolveReport,
}

fn bare_report(
    problem: Problem,
    n: usize,
    k: Option<usize>,
    opts: &SolveOpts,
    branch: Branch,
) -> SolveReport {
    SolveReport {
        problem,
        n,
        k,
        eps: opts.eps,
        status: SolveStatus::Solved,
        branch,
        cost_exact: None,
        cost_estimate: None,
        queries_raw: 0,
        queries_dedup: 0,
        seed: opts.seed,
        wall_ms: 0.0,
        trace: Vec::new(),
    }
}

fn finish(report: &mut SolveReport, oracle: &dyn PairOracle, start: Instant) {
    let q = oracle.queries();
    report.queries_raw = q.raw;
    report.queries_dedup = q.dedup;
    report.wall_ms = start.elapsed().as_secs_f64() * 1e3;
}

pub fn solve_kcc(g: &LabeledGraph, opts: &SolveOpts) -> Result<Solved, Failure> {
    let c = &opts.constants;
    let (n, k) = (g.n(), opts.k);
    let start = Instant::now();
    let (clustering, mut report) = match opts.mode {
        Mode::Dispatch => dispatch_kcc(g, k, opts.eps, c, opts.seed)?,
        Mode::Low => {
            let (cl, trace) = kcc_low_ptas(g, k, opts.eps, c, opts.seed)?;
            let mut report = bare_report(Problem::Kcc, n, Some(k), opts, trace.levels[0].branch);
            report.trace = trace.levels;
            finish(&mut report, g, start);
            (cl, report)
        }
        Mode::High => {
            let plan = match &opts.truth {
                Some(t) => EnumerationPlan::oracle_seeded(t.clone(), opts.budget),
                None => EnumerationPlan::exhaustive(opts.budget),
            };
            let gamma = c.q_threshold(opts.eps, k);
            let (cl, _) = kcc_high_ptas(g, k, opts.eps, gamma, c, &plan, opts.seed)?;
            let mut report = bare_report(Problem::Kcc, n, Some(k), opts, Branch::High);
            finish(&mut report, g, start);
            (cl, report)
        }
    };
    report.cost_exact = Some(kcc_cost(g, &clustering)?);
    Ok(Solved {
        solution: Some(clustering.assignment().to_vec()),
        report,
    })
}

pub fn solve_mfast(t: &Tournament, opts: &SolveOpts) -> Result<Solved, Failure> {
    let c = &opts.constants;
    let n = t.n();
    let start = Instant::now();
    let (pi, mut report) = match opts.mode {
        Mode::Dispatch => dispatch_mfast(t, opts.eps, c, &ExactLowMfast, opts.seed)?,
        Mode::Low => {
            let pi = ExactLowMfast.solve(t, c)?;
            let mut report = bare_report(Problem::Mfast, n, None, opts, Branch::Low);
            if pi.is_none() {
                report.status = SolveStatus::UnsupportedScale;
            }
            finish(&mut report, t, start);
            (pi, report)
        }
        Mode::High => {
            let gamma = c.p_threshold(opts.eps);
            let plan = match &opts.truth {
                Some(ranks) => {
                    let m = c
                        .high_cost_sizes(Problem::Mfast, n, opts.eps, gamma)
                        .m
                        .min(n)
                        .max(1);
                    let sigma =
                        bucket_from_permutation(&Permutation::from_ranks(ranks.clone())?, m)?;
                    EnumerationPlan::oracle_seeded(sigma.buckets().to_vec(), opts.budget)
                }
                None => EnumerationPlan::exhaustive(opts.budget),
            };
            let (pi, _, _) = mfast_high_ptas(t, opts.eps, gamma, c, &plan, opts.seed)?;
            let mut report = bare_report(Problem::Mfast, n, None, opts, Branch::High);
            finish(&mut report, t, start);
            (Some(pi), report)
        }
    };
    if let Some(pi) = &pi {
        report.cost_exact = Some(mfast_cost(t, pi)?);
    }
    Ok(Solved {
        solution: pi.map(|p| p.ranks().to_vec()),
        report,
    })
}

/// Checks that hold for every report and solution the solvers return.
pub fn check_invariants(solved: &Solved, n: usize) -> Result<(), Failure> {
    let r = &solved.report;
    if r.queries_dedup > r.queries_raw {
        return Err(Failure::Invariant(format!(
            "dedup queries {} exceed raw {}",
            r.queries_dedup, r.queries_raw
        )));
    }
    let pairs = (n * n.saturating_sub(1) / 2) as u64;
    if r.queries_dedup > pairs {
        return Err(Failure::Invariant(format!(
            "dedup queries {} exceed C(n,2) = {pairs}",
            r.queries_dedup
        )));
    }
    match (&solved.solution, r.status) {
        (Some(s), SolveStatus::Solved) if s.len() == n => Ok(()),
        (None, SolveStatus::UnsupportedScale) => Ok(()),
        _ => Err(Failure::Invariant(
            "solution does not match the report status".into(),
        )),
    }
}

fn check_truth_len(opts: &SolveOpts, n: usize) -> Result<(), Failure> {
    match &opts.truth {
        Some(t) if t.len() != n => Err(Failure::Usage(format!(
            "truth sidecar has {} entries for n={n}",
            t.len()
        ))),
        _ => Ok(()),
    }
}

pub fn run(args: &SolveArgs) -> Result<(), Failure> {
    if !(args.eps > 0.0 && args.eps.is_finite()) {
        return Err(Failure::Usage(format!(
            "--eps must be positive, got {}",
            args.eps
        )));
    }
    let c = constants(&args.consts)?;
    let instance = load_instance(&args.input)?;
    let truth_text = args
        .truth
        .as_ref()
        .map(std::fs::read_to_string)
        .transpose()?;
    let n = instance.n();
    let budget = args.budget.unwrap_or(c.guess_budget as usize);
    let mut opts = SolveOpts {
        eps: args.eps,
        k: 1,
        seed: args.seed,
        mode: args.mode,
        constants: c,
        budget,
        truth: None,
    };
    let solved = match instance {
        Instance::Kcc(g) => {
            let k = args
                .k
                .ok_or_else(|| Failure::Usage("--k is required for kcc instances".into()))?;
            opts.k = k as usize;
            if let Some(text) = &truth_text {
                let truth = parse_clustering_sidecar(text, None).map_err(qptas::Error::from)?;
                opts.truth = Some(truth.assignment().to_vec());
            }
            check_truth_len(&opts, n)?;
            solve_kcc(&g, &opts)?
        }
        Instance::Mfast(t) => {
            if let Some(text) = &truth_text {
                let truth = parse_permutation_sidecar(text).map_err(qptas::Error::from)?;
                opts.truth = Some(truth.ranks().to_vec());
            }
            check_truth_len(&opts, n)?;
            solve_mfast(&t, &opts)?
        }
    };
    check_invariants(&solved, n)?;
    let json = serde_json::to_string_pretty(&solved.report).expect("report serializes") + "\n";
    write_or_print(args.out.as_ref(), &json)?;
    if let (Some(path), Some(sol)) = (&args.solution, &solved.solution) {
        std::fs::write(path, sidecar_text(sol))?;
    }
    if solved.report.status == SolveStatus::UnsupportedScale {
        return Err(Failure::Unsupported(format!(
            "n={n} is beyond the low-cost solver cap; the report carries status unsupported_scale"
        )));
    }
    Ok(())
}
