use std::path::PathBuf;

use clap::Args;
use qptas::instances::{gen_planted_clustering, gen_planted_tournament};
use qptas::oracles::{brute_force_kcc, brute_force_mfast};
use qptas::SolveStatus;
use rayon::prelude::*;

use crate::solve::{solve_kcc, solve_mfast, Mode, SolveOpts, Solved};
use crate::{constants, Failure, ProblemArg};

pub const HEADER: [&str; 12] = [
    "n",
    "seed",
    "status",
    "branch",
    "cost",
    "reference",
    "reference_kind",
    "approx_ratio",
    "additive_gap",
    "queries_raw",
    "queries_dedup",
    "pairs",
];

#[derive(Args)]
pub struct BenchArgs {
    #[arg(long, value_enum)]
    problem: ProblemArg,
    /// Instance sizes, comma separated; `--n` with no value gives an empty sweep.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    n: Vec<usize>,
    /// Seeds as `a..b` (half-open) or a comma-separated list.
    #[arg(long, value_parser = parse_seeds, default_value = "0..10")]
    seeds: SeedList,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
    k: u64,
    /// Label flip probability of the generated k-CC instances.
    #[arg(long, default_value_t = 0.05)]
    noise: f64,
    /// Arc flip probability of the generated tournaments.
    #[arg(long, default_value_t = 0.5)]
    flip: f64,
    #[arg(long, default_value_t = 0.5)]
    eps: f64,
    #[arg(long, value_enum, default_value = "dispatch")]
    mode: Mode,
    #[arg(long = "const", value_name = "NAME=VALUE")]
    consts: Vec<String>,
    /// CSV path (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Debug)]
pub struct SeedList(Vec<u64>);

fn parse_seeds(s: &str) -> Result<SeedList, String> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once("..") {
        let a: u64 = a
            .trim()
            .parse()
            .map_err(|e| format!("bad seed range start: {e}"))?;
        let b: u64 = b
            .trim()
            .parse()
            .map_err(|e| format!("bad seed range end: {e}"))?;
        return Ok(SeedList((a..b).collect()));
    }
    if s.is_empty() {
        return Ok(SeedList(Vec::new()));
    }
    s.split(',')
        .map(|x| x.trim().parse().map_err(|e| format!("bad seed `{x}`: {e}")))
        .collect::<Result<_, _>>()
        .map(SeedList)
}

struct Row {
    n: usize,
    seed: u64,
    status: String,
    branch: String,
    cost: Option<u64>,
    reference: u64,
    reference_kind: &'static str,
    queries_raw: u64,
    queries_dedup: u64,
}

impl Row {
    fn record(&self) -> Vec<String> {
        let opt = |v: Option<String>| v.unwrap_or_default();
        let (ratio, gap) = match (self.cost, self.reference_kind) {
            (Some(c), "optimum") => {
                let r = if self.reference == 0 {
                    if c == 0 {
                        1.0
                    } else {
                        f64::INFINITY
                    }
                } else {
                    c as f64 / self.reference as f64
                };
                (Some(format!("{r:.6}")), None)
            }
            (Some(c), _) => {
                let g = (c as f64 - self.reference as f64) / (self.n * self.n) as f64;
                (None, Some(format!("{g:.6}")))
            }
            (None, _) => (None, None),
        };
        vec![
            self.n.to_string(),
            self.seed.to_string(),
            self.status.clone(),
            self.branch.clone(),
            opt(self.cost.map(|c| c.to_string())),
            self.reference.to_string(),
            self.reference_kind.to_string(),
            opt(ratio),
            opt(gap),
            self.queries_raw.to_string(),
            self.queries_dedup.to_string(),
            (self.n * self.n.saturating_sub(1) / 2).to_string(),
        ]
    }
}

fn label<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_value(v)
        .ok()
        .and_then(|j| j.as_str().map(str::to_owned))
        .unwrap_or_default()
}

fn run_row(args: &BenchArgs, c: &qptas::Constants, n: usize, seed: u64) -> Result<Row, Failure> {
    let opts = SolveOpts {
        eps: args.eps,
        k: args.k as usize,
        seed,
        mode: args.mode,
        constants: c.clone(),
        budget: c.guess_budget as usize,
        truth: None,
    };
    let (solved, reference, kind): (Result<Solved, Failure>, u64, &'static str) = match args.problem
    {
        ProblemArg::Kcc => {
            let (g, truth) = gen_planted_clustering(n, opts.k, args.noise, seed)?;
            let (reference, kind) = match brute_force_kcc(&g, opts.k, c.brute_force_bits) {
                Ok((_, opt)) => (opt, "optimum"),
                Err(_) => (truth.flipped_pairs as u64, "planted"),
            };
            (solve_kcc(&g, &opts), reference, kind)
        }
        ProblemArg::Mfast => {
            let (t, truth) = gen_planted_tournament(n, args.flip, seed)?;
            let (reference, kind) = match brute_force_mfast(&t, c.mfast_cap as usize) {
                Ok((_, opt)) => (opt, "optimum"),
                Err(_) => (truth.flipped_pairs as u64, "planted"),
            };
            (solve_mfast(&t, &opts), reference, kind)
        }
    };
    let mut row = Row {
        n,
        seed,
        status: String::new(),
        branch: String::new(),
        cost: None,
        reference,
        reference_kind: kind,
        queries_raw: 0,
        queries_dedup: 0,
    };
    match solved {
        Ok(s) => {
            row.status = label(&s.report.status);
            row.branch = label(&s.report.branch);
            row.cost = s
                .report
                .cost_exact
                .filter(|_| s.report.status == SolveStatus::Solved);
            row.queries_raw = s.report.queries_raw;
            row.queries_dedup = s.report.queries_dedup;
        }
        // a failed row is reported, not fatal
        Err(Failure::Unsupported(_)) => row.status = "no_candidate".into(),
        Err(f) => return Err(f),
    }
    Ok(row)
}

pub fn run(args: &BenchArgs) -> Result<(), Failure> {
    let c = constants(&args.consts)?;
    let mut sizes = args.n.clone();
    sizes.sort_unstable();
    sizes.dedup();
    let mut seeds = args.seeds.0.clone();
    seeds.sort_unstable();
    seeds.dedup();
    let jobs: Vec<(usize, u64)> = sizes
        .iter()
        .flat_map(|&n| seeds.iter().map(move |&s| (n, s)))
        .collect();
    let rows: Vec<Row> = jobs
        .par_iter()
        .map(|&(n, seed)| run_row(args, &c, n, seed))
        .collect::<Result<_, _>>()?;

    let sink: Box<dyn std::io::Write> = match &args.out {
        Some(p) => Box::new(std::fs::File::create(p)?),
        None => Box::new(std::io::stdout()),
    };
    let mut w = csv::Writer::from_writer(sink);
    let io = |e: csv::Error| Failure::Usage(e.to_string());
    w.write_record(HEADER).map_err(io)?;
    for row in &rows {
        w.write_record(row.record()).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}
