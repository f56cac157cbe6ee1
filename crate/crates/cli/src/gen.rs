use std::path::PathBuf;

use clap::Args;
use qptas::instances::{
    gen_planted_clustering, gen_planted_tournament, sidecar_text, Instance, Planted,
};

use crate::{Failure, ProblemArg};

#[derive(Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    problem: ProblemArg,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    /// Number of planted clusters (k-CC).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    k: Option<u64>,
    /// Label flip probability (k-CC).
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    /// Arc flip probability (MFAST).
    #[arg(long, default_value_t = 0.0)]
    flip: f64,
    #[arg(long)]
    seed: u64,
    /// Instance path; the sidecar goes next to it with a `.truth` extension.
    /// Defaults to `<problem>_n<n>_seed<seed>.txt`.
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn run(args: &GenArgs) -> Result<(), Failure> {
    let n = args.n as usize;
    let (instance, truth) = match args.problem {
        ProblemArg::Kcc => {
            let k = args
                .k
                .ok_or_else(|| Failure::Usage("--k is required for kcc".into()))?
                as usize;
            let (g, truth) = gen_planted_clustering(n, k, args.noise, args.seed)?;
            (Instance::Kcc(g), truth)
        }
        ProblemArg::Mfast => {
            let (t, truth) = gen_planted_tournament(n, args.flip, args.seed)?;
            (Instance::Mfast(t), truth)
        }
    };
    let out = args.out.clone().unwrap_or_else(|| {
        PathBuf::from(format!("{}_n{n}_seed{}.txt", instance.problem(), args.seed))
    });
    let sidecar = out.with_extension("truth");
    let values = match &truth.planted {
        Planted::Clustering(c) => c.assignment().to_vec(),
        Planted::Permutation(p) => p.ranks().to_vec(),
    };
    std::fs::write(&out, instance.to_text())?;
    std::fs::write(&sidecar, sidecar_text(&values))?;
    println!(
        "{} {} planted_cost={}",
        out.display(),
        sidecar.display(),
        truth.flipped_pairs
    );
    Ok(())
}
