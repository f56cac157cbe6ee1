use qptas::bucket::{bucket_from_permutation, cost_ensemble, BucketOrder};
use qptas::high_cost::{
    high_cost_run, kcc_high_ptas, mfast_high_ptas, CandidateStatus, EnumerationPlan, ExactLowMfast,
};
use qptas::instances::{gen_planted_clustering, gen_planted_tournament};
use qptas::lp::{build_lp, repair_balance, round_lp, solve_lp_lazy, RowKind};
use qptas::oracles::{brute_force_kcc, kcc_cost, mfast_bucket_cost, mfast_cost};
use qptas::{
    dispatch_mfast, draw_sample, Branch, Constants, Error, HighCostSizes, PairOracle, Permutation,
    Problem, SampleEnsemble, SolveStatus, Tournament,
};

#[test]
fn seeded_kcc_recovers_clean_clusters() {
    let c = Constants::desk();
    let mut good = 0;
    for seed in 0..50 {
        let (g, truth) = gen_planted_clustering(40, 2, 0.0, seed).unwrap();
        let plan =
            EnumerationPlan::oracle_seeded(truth.clustering().unwrap().assignment().to_vec(), 8);
        let (cl, _) = kcc_high_ptas(&g, 2, 0.5, c.q_threshold(0.5, 2), &c, &plan, seed).unwrap();
        good += (kcc_cost(&g, &cl).unwrap() as f64 <= 0.02 * 1600.0) as usize;
    }
    assert!(good >= 45, "{good}/50");
}

#[test]
fn one_cluster() {
    let c = Constants::desk();
    let (g, _) = gen_planted_clustering(30, 3, 0.2, 1).unwrap();
    let (cl, _) = kcc_high_ptas(&g, 1, 0.5, 0.1, &c, &EnumerationPlan::exhaustive(16), 1).unwrap();
    assert!(cl.assignment().iter().all(|&j| j == 0));
}

#[test]
fn tiny_noisy_kcc_near_optimal() {
    let c = Constants::desk();
    let mut within = 0;
    for seed in 0..100 {
        let (g, _) = gen_planted_clustering(8, 2, 0.5, seed).unwrap();
        let (_, opt) = brute_force_kcc(&g, 2, 24.0).unwrap();
        let plan =
            EnumerationPlan::exhaustive(4096).with_sizes(HighCostSizes { s: 3, p: 20, m: 2 });
        let (cl, _) = kcc_high_ptas(&g, 2, 0.5, 0.075, &c, &plan, seed).unwrap();
        within += (kcc_cost(&g, &cl).unwrap() as f64 <= opt as f64 + 0.08 * 64.0) as usize;
    }
    assert!(within >= 90, "{within}/100");
}

#[test]
fn infeasible_only_guess_is_an_error() {
    let c = Constants::desk();
    let t = Tournament::transitive(6);
    let plan = EnumerationPlan::oracle_seeded(vec![0; 6], 1).with_sizes(HighCostSizes {
        s: 30,
        p: 5,
        m: 3,
    });
    let err = mfast_high_ptas(&t, 0.5, 0.2, &c, &plan, 3).unwrap_err();
    assert!(matches!(err, Error::NoFeasibleCandidate), "{err:?}");
}

#[test]
fn selection_takes_smallest_score() {
    let c = Constants::desk();
    for seed in 0..5 {
        let (t, _) = gen_planted_tournament(12, 0.3, seed).unwrap();
        let plan = EnumerationPlan::exhaustive(4096);
        let run = high_cost_run(&t, Problem::Mfast, 3, 0.5, 0.2, &c, &plan, seed).unwrap();
        let best = &run.candidates[run.selected];
        for cand in &run.candidates {
            match (cand.status, cand.score) {
                (CandidateStatus::Optimal, Some(s)) => {
                    assert!(best.score.unwrap() <= s);
                    let sol = cand.solution.as_ref().unwrap();
                    let fresh = cost_ensemble(&t, Problem::Mfast, sol, &run.ensemble);
                    assert!((fresh - s).abs() <= 1e-9 * s.max(1.0));
                }
                (_, score) => assert!(score.is_none() && cand.solution.is_none()),
            }
        }
        assert_eq!(best.guess_id, run.selected);
    }
}

#[test]
fn selected_candidate_is_nearly_best_exactly() {
    // deviation bound of the ensemble estimate, frozen from the concentration calibration
    const C_HAT: f64 = 0.16;
    let c = Constants::desk();
    let (n, eps, gamma) = (60, 0.5, 0.2);
    let mut within = 0;
    for seed in 0..20 {
        let (t, _) = gen_planted_tournament(n, 0.3, seed).unwrap();
        let plan = EnumerationPlan::exhaustive(4096);
        let run = high_cost_run(&t, Problem::Mfast, 3, eps, gamma, &c, &plan, seed).unwrap();
        let exact = |sol: &[usize]| {
            mfast_bucket_cost(&t, &BucketOrder::new(3, sol.to_vec()).unwrap()).unwrap()
        };
        let best = run
            .candidates
            .iter()
            .filter_map(|c| c.solution.as_deref())
            .map(exact)
            .min()
            .unwrap();
        let chosen = exact(run.selected_solution());
        within +=
            (chosen as f64 <= best as f64 + 2.0 * C_HAT * eps * gamma * (n * n) as f64) as usize;
    }
    assert!(within >= 19, "{within}/20");
}

#[test]
fn dispatch_mfast_branches() {
    let c = Constants::desk();

    let (t, _) = gen_planted_tournament(60, 0.5, 4).unwrap();
    let (pi, report) = dispatch_mfast(&t, 0.5, &c, &ExactLowMfast, 4).unwrap();
    assert!(pi.is_some());
    assert_eq!(report.branch, Branch::High);
    assert!(report.queries_dedup < 60 * 59 / 2);

    let t = Tournament::transitive(9);
    let (pi, report) = dispatch_mfast(&t, 0.5, &c, &ExactLowMfast, 4).unwrap();
    assert_eq!(report.branch, Branch::Low);
    assert_eq!(mfast_cost(&t, &pi.unwrap()).unwrap(), 0);

    let t = Tournament::transitive(40);
    let (pi, report) = dispatch_mfast(&t, 0.5, &c, &ExactLowMfast, 4).unwrap();
    assert!(pi.is_none());
    assert_eq!(report.status, SolveStatus::UnsupportedScale);
}

#[test]
fn truth_guess_rounding_gap() {
    let c = Constants::desk();
    let (n, m, eps, gamma) = (60, 3, 0.5, 0.2);
    let sizes = c.high_cost_sizes(Problem::Mfast, n, eps, gamma);
    let mut within = 0;
    for seed in 0..100 {
        let (t, truth) = gen_planted_tournament(n, 0.1, seed).unwrap();
        let sigma = bucket_from_permutation(truth.permutation().unwrap(), m).unwrap();
        let sample = draw_sample(n, sizes.s, seed).unwrap();
        let (verts, _) = sample.distinct();
        let guess: Vec<usize> = verts.iter().map(|&v| sigma.bucket(v)).collect();
        let ens = SampleEnsemble::draw(n, sizes.p, seed).unwrap();
        let model = build_lp(&t, Problem::Mfast, &sample, &guess, &ens, m, gamma, eps, &c).unwrap();
        let x = solve_lp_lazy(&model).unwrap();
        let rounded = round_lp(&model, &x, seed);
        for &v in &verts {
            assert_eq!(rounded[v], sigma.bucket(v));
        }
        let (cand, _) = repair_balance(m, &rounded).unwrap();
        let gap = mfast_bucket_cost(&t, &cand).unwrap() as f64
            - mfast_bucket_cost(&t, &sigma).unwrap() as f64;
        within += (gap <= 0.10 * (n * n) as f64) as usize;
    }
    assert!(within >= 90, "{within}/100");
}

#[test]
fn lp_rows_and_query_accounting() {
    let c = Constants::desk();
    let (n, m) = (80, 3);
    let (t, _) = gen_planted_tournament(n, 0.2, 11).unwrap();
    let sample = draw_sample(n, 10, 11).unwrap();
    let (verts, _) = sample.distinct();
    let guess: Vec<usize> = verts.iter().map(|&v| v % m).collect();
    let ens = SampleEnsemble::draw(n, 7, 11).unwrap();
    let model = build_lp(&t, Problem::Mfast, &sample, &guess, &ens, m, 0.2, 0.5, &c).unwrap();
    assert!(t.queries().dedup <= (n * (10 + 7)) as u64);
    let unit = n as f64 / (2.0 * 7.0);
    for row in model.rows.iter().filter(|r| r.is_crux()) {
        assert!(row.l0 <= 7);
        assert!(row.linf <= unit * 7.0 + 1e-9);
        for &(_, a) in &row.coeffs {
            let mult = a / unit;
            assert!((mult - mult.round()).abs() < 1e-9 && mult >= 1.0);
        }
    }
    assert_eq!(model.count(|k| matches!(k, RowKind::Simplex { .. })), n);
    assert_eq!(model.count(|k| matches!(k, RowKind::Balance { .. })), 2 * m);
    assert_eq!(
        model.count(|k| matches!(k, RowKind::Crux { .. })),
        2 * n * m
    );
}

#[test]
fn identity_bucketing_is_feasible_for_transitive_input() {
    let c = Constants::desk();
    let n = 40;
    let t = Tournament::transitive(n);
    let sigma = bucket_from_permutation(&Permutation::identity(n), 3).unwrap();
    let sample = draw_sample(n, 20, 5).unwrap();
    let (verts, _) = sample.distinct();
    let guess: Vec<usize> = verts.iter().map(|&v| sigma.bucket(v)).collect();
    let ens = SampleEnsemble::draw(n, 20, 5).unwrap();
    let model = build_lp(&t, Problem::Mfast, &sample, &guess, &ens, 3, 0.2, 0.5, &c).unwrap();
    assert!(model.max_violation(&model.point(sigma.buckets())) <= 1e-9);
}
