//! Pilot runs used to pick desk constants and test slacks. Seeds start at
//! 1000 so they never overlap the seeds used by the acceptance suite.

use qptas::bucket::{bucket_from_permutation, cost_ensemble, cost_sample};
use qptas::draw_sample;
use qptas::high_cost::{kcc_high_ptas, mfast_high_ptas, EnumerationPlan};
use qptas::instances::{gen_planted_clustering, gen_planted_tournament};
use qptas::lp::{build_lp, repair_balance, round_lp, solve_lp_lazy};
use qptas::oracles::{brute_force_kcc, brute_force_mfast, kcc_cost, mfast_bucket_cost, mfast_cost};
use qptas::{Constants, HighCostSizes, Permutation, Problem, SampleEnsemble, Tournament};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn arg<T: std::str::FromStr>(args: &[String], i: usize, default: T) -> T {
    args.get(i).and_then(|a| a.parse().ok()).unwrap_or(default)
}

fn quantiles(mut v: Vec<f64>) -> String {
    v.sort_by(f64::total_cmp);
    let q = |p: f64| v[((v.len() - 1) as f64 * p).round() as usize];
    format!(
        "p50={:.4} p90={:.4} p95={:.4} max={:.4}",
        q(0.5),
        q(0.9),
        q(0.95),
        q(1.0)
    )
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let mode = args.get(1).map_or("seeded", String::as_str);
    let c = Constants::desk();
    match mode {
        "seeded" => {
            let (s, p, seeds) = (arg(&args, 2, 120), arg(&args, 3, 20), arg(&args, 4, 200u64));
            let t = Tournament::transitive(60);
            let truth = bucket_from_permutation(&Permutation::identity(60), 3).unwrap();
            let mut zero = 0;
            for seed in 1000..1000 + seeds {
                let t = t.fresh();
                let plan = EnumerationPlan::oracle_seeded(truth.buckets().to_vec(), 8)
                    .with_sizes(HighCostSizes { s, p, m: 3 });
                if let Ok((pi, _, _)) = mfast_high_ptas(&t, 0.5, 0.2, &c, &plan, seed) {
                    zero += (mfast_cost(&t, &pi).unwrap() == 0) as usize;
                }
            }
            println!("seeded s={s} p={p}: zero {zero}/{seeds}");
        }
        "tiny-mfast" => {
            let (s, m, seeds) = (arg(&args, 2, 2), arg(&args, 3, 2), arg(&args, 4, 1000u64));
            let mut gaps = Vec::new();
            for seed in 1000..1000 + seeds {
                let (t, _) = gen_planted_tournament(8, 0.5, seed).unwrap();
                let (_, opt) = brute_force_mfast(&t, 10).unwrap();
                let plan =
                    EnumerationPlan::exhaustive(4096).with_sizes(HighCostSizes { s, p: 20, m });
                let (pi, _, _) = mfast_high_ptas(&t, 0.5, 0.2, &c, &plan, seed).unwrap();
                gaps.push((mfast_cost(&t, &pi).unwrap() - opt) as f64 / 64.0);
            }
            println!("tiny-mfast s={s} m={m}: gap/n^2 {}", quantiles(gaps));
        }
        "tiny-kcc" => {
            let (s, seeds) = (arg(&args, 2, 3), arg(&args, 3, 1000u64));
            let mut gaps = Vec::new();
            for seed in 1000..1000 + seeds {
                let (g, _) = gen_planted_clustering(8, 2, 0.5, seed).unwrap();
                let (_, opt) = brute_force_kcc(&g, 2, 24.0).unwrap();
                let plan =
                    EnumerationPlan::exhaustive(4096).with_sizes(HighCostSizes { s, p: 20, m: 2 });
                let (cl, _) = kcc_high_ptas(&g, 2, 0.5, 0.075, &c, &plan, seed).unwrap();
                gaps.push((kcc_cost(&g, &cl).unwrap() - opt) as f64 / 64.0);
            }
            println!("tiny-kcc s={s}: gap/n^2 {}", quantiles(gaps));
        }
        "conc" => {
            // deviation / (eps gamma n^2) at n=200, eps=0.5, gamma=0.2
            let seeds = arg(&args, 2, 200u64);
            let (n, m) = (200, 3);
            let sizes = c.high_cost_sizes(Problem::Mfast, n, 0.5, 0.2);
            let unit = 0.5 * 0.2 * (n * n) as f64;
            let (mut fixed, mut uniform) = (Vec::new(), Vec::new());
            for seed in 1000..1000 + seeds {
                let (t, truth) = gen_planted_tournament(n, 0.2, seed).unwrap();
                let sigma = bucket_from_permutation(truth.permutation().unwrap(), m).unwrap();
                let exact = mfast_bucket_cost(&t, &sigma).unwrap() as f64;
                let sample = draw_sample(n, sizes.s, seed).unwrap();
                fixed.push(
                    (cost_sample(&t, Problem::Mfast, sigma.buckets(), &sample) - exact).abs()
                        / unit,
                );
                let ens = SampleEnsemble::draw(n, sizes.p, seed).unwrap();
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut worst: f64 = 0.0;
                for _ in 0..100 {
                    let mut order: Vec<usize> = (0..n).collect();
                    order.shuffle(&mut rng);
                    let pi = Permutation::from_order(order).unwrap();
                    let sigma = bucket_from_permutation(&pi, m).unwrap();
                    let exact = mfast_bucket_cost(&t, &sigma).unwrap() as f64;
                    worst = worst.max(
                        (cost_ensemble(&t, Problem::Mfast, sigma.buckets(), &ens) - exact).abs()
                            / unit,
                    );
                }
                uniform.push(worst);
            }
            println!(
                "conc s={} p={}: fixed {}",
                sizes.s,
                sizes.p,
                quantiles(fixed)
            );
            println!(
                "conc uniform over 100 random orders: {}",
                quantiles(uniform)
            );
        }
        "seeded-kcc" => {
            let seeds = arg(&args, 2, 200u64);
            let mut gaps = Vec::new();
            for seed in 1000..1000 + seeds {
                let (g, truth) = gen_planted_clustering(40, 2, 0.0, seed).unwrap();
                let plan = EnumerationPlan::oracle_seeded(
                    truth.clustering().unwrap().assignment().to_vec(),
                    8,
                );
                let (cl, _) =
                    kcc_high_ptas(&g, 2, 0.5, c.q_threshold(0.5, 2), &c, &plan, seed).unwrap();
                gaps.push(kcc_cost(&g, &cl).unwrap() as f64 / 1600.0);
            }
            println!("seeded-kcc n=40: cost/n^2 {}", quantiles(gaps));
        }
        "rounding-gap" => {
            // exact cost of the rounded, repaired truth-guess candidate minus the truth's cost
            let seeds = arg(&args, 2, 200u64);
            let (n, m, eps, gamma) = (60, 3, 0.5, 0.2);
            let sizes = c.high_cost_sizes(Problem::Mfast, n, eps, gamma);
            let mut gaps = Vec::new();
            for seed in 1000..1000 + seeds {
                let (t, truth) = gen_planted_tournament(n, 0.1, seed).unwrap();
                let sigma = bucket_from_permutation(truth.permutation().unwrap(), m).unwrap();
                let sample = draw_sample(n, sizes.s, seed).unwrap();
                let (verts, _) = sample.distinct();
                let guess: Vec<usize> = verts.iter().map(|&v| sigma.bucket(v)).collect();
                let ens = SampleEnsemble::draw(n, sizes.p, seed).unwrap();
                let model =
                    build_lp(&t, Problem::Mfast, &sample, &guess, &ens, m, gamma, eps, &c).unwrap();
                let x = solve_lp_lazy(&model).unwrap();
                let (cand, _) = repair_balance(m, &round_lp(&model, &x, seed)).unwrap();
                let gap = mfast_bucket_cost(&t, &cand).unwrap() as f64
                    - mfast_bucket_cost(&t, &sigma).unwrap() as f64;
                gaps.push(gap / (n * n) as f64);
            }
            println!("rounding-gap n=60: {}", quantiles(gaps));
        }
        _ => eprintln!("unknown mode {mode}"),
    }
}
