use proptest::prelude::*;
use qptas::bucket::{bucket_from_permutation, extend_to_permutation, strict_bounds};
use qptas::estimator::estimate_with_sample;
use qptas::lp::{build_lp, repair_balance, round_lp, solve_lp_lazy};
use qptas::oracles::{
    brute_force_kcc, brute_force_mfast, kcc_cost, mfast_bucket_cost, mfast_cost, VertexCostView,
};
use qptas::{
    draw_sample, Clustering, Constants, LabeledGraph, PairOracle, Permutation, Problem,
    SampleEnsemble, Tournament,
};

fn graph(n: usize, bits: &[bool]) -> LabeledGraph {
    let mut g = LabeledGraph::empty(n);
    let mut i = 0;
    for v in 0..n {
        for u in 0..v {
            g.set_edge(u, v, bits[i]).unwrap();
            i += 1;
        }
    }
    g
}

fn tournament(n: usize, bits: &[bool]) -> Tournament {
    let mut t = Tournament::transitive(n);
    let mut i = 0;
    for v in 0..n {
        for u in 0..v {
            if bits[i] {
                t.set_arc(v, u).unwrap();
            }
            i += 1;
        }
    }
    t
}

/// Vertex count and one bit per unordered pair.
fn arb_pairs(max_n: usize) -> impl Strategy<Value = (usize, Vec<bool>)> {
    (2..=max_n).prop_flat_map(|n| {
        (
            Just(n),
            prop::collection::vec(any::<bool>(), n * (n - 1) / 2),
        )
    })
}

fn arb_graph(max_n: usize) -> impl Strategy<Value = LabeledGraph> {
    arb_pairs(max_n).prop_map(|(n, b)| graph(n, &b))
}

fn arb_tournament(max_n: usize) -> impl Strategy<Value = Tournament> {
    arb_pairs(max_n).prop_map(|(n, b)| tournament(n, &b))
}

fn arb_perm(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|o| Permutation::from_order(o).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn vertex_costs_sum_to_twice_the_cost(((n, bits), assign) in arb_pairs(12).prop_flat_map(|(n, b)| {
        (Just((n, b)), prop::collection::vec(0..3usize, n))
    })) {
        let g = graph(n, &bits);
        let c = Clustering::new(3, assign).unwrap();
        let view = VertexCostView::new(&g, &c).unwrap();
        let total: u64 = (0..g.n()).map(|v| view.own_cost(v)).sum();
        prop_assert_eq!(total, 2 * kcc_cost(&g, &c).unwrap());
    }

    #[test]
    fn bucket_cost_sandwich(((n, bits), pi) in arb_pairs(12).prop_flat_map(|(n, b)| (Just((n, b)), arb_perm(n))),
                            m in 1..5usize) {
        let t = tournament(n, &bits);
        let m = m.min(t.n());
        let sigma = bucket_from_permutation(&pi, m).unwrap();
        let bucket = mfast_bucket_cost(&t, &sigma).unwrap();
        let full = mfast_cost(&t, &pi).unwrap();
        let within: u64 = sigma.sizes().iter().map(|&s| (s * s.saturating_sub(1) / 2) as u64).sum();
        prop_assert!(bucket <= full && full <= bucket + within);
    }

    #[test]
    fn optimum_is_relabel_invariant(((n, bits), pi) in arb_pairs(7).prop_flat_map(|(n, b)| (Just((n, b)), arb_perm(n)))) {
        let g = graph(n, &bits);
        let mut h = LabeledGraph::empty(n);
        for v in 0..n {
            for u in 0..v {
                h.set_edge(pi.rank(u), pi.rank(v), g.peek_edge(u, v)).unwrap();
            }
        }
        prop_assert_eq!(brute_force_kcc(&g, 2, 24.0).unwrap().1, brute_force_kcc(&h, 2, 24.0).unwrap().1);
    }

    #[test]
    fn mfast_optimum_is_relabel_invariant(((n, bits), pi) in arb_pairs(7).prop_flat_map(|(n, b)| (Just((n, b)), arb_perm(n)))) {
        let t = tournament(n, &bits);
        let mut h = Tournament::transitive(n);
        for v in 0..n {
            for u in 0..n {
                if u != v && t.peek_arc(u, v) {
                    h.set_arc(pi.rank(u), pi.rank(v)).unwrap();
                }
            }
        }
        prop_assert_eq!(brute_force_mfast(&t, 8).unwrap().1, brute_force_mfast(&h, 8).unwrap().1);
    }

    #[test]
    fn counters_are_monotone(g in arb_graph(10), pairs in prop::collection::vec((0..10usize, 0..10usize), 0..40)) {
        let mut last = g.queries();
        for (u, v) in pairs {
            let (u, v) = (u % g.n(), v % g.n());
            if u == v {
                continue;
            }
            g.relation(u, v);
            let now = g.queries();
            prop_assert_eq!(now.raw, last.raw + 1);
            prop_assert!(now.dedup >= last.dedup && now.dedup <= now.raw);
            last = now;
        }
    }

    #[test]
    fn estimated_costs_are_bounded(g in arb_graph(14), t in 1..30usize, k in 1..4usize, seed in any::<u64>()) {
        let n = g.n();
        let table = estimate_with_sample(&g, k, draw_sample(n, t, seed).unwrap(), &Constants::desk(), seed).unwrap();
        for &x in &table.tcost {
            prop_assert!((0.0..=n as f64).contains(&x));
        }
    }

    #[test]
    fn rounding_keeps_hardwired_slots(t in arb_tournament(12), seed in any::<u64>()) {
        let c = Constants::desk();
        let n = t.n();
        let m = 3.min(n);
        let sample = draw_sample(n, 3, seed).unwrap();
        let (verts, _) = sample.distinct();
        let guess: Vec<usize> = verts.iter().map(|&v| v % m).collect();
        let ens = SampleEnsemble::draw(n, 4, seed).unwrap();
        let model = build_lp(&t, Problem::Mfast, &sample, &guess, &ens, m, 0.2, 0.5, &c).unwrap();
        if let Ok(x) = solve_lp_lazy(&model) {
            for v in 0..n {
                let row: f64 = (0..m).map(|j| x.value(m, v, j)).sum();
                prop_assert!((row - 1.0).abs() <= 1e-7);
            }
            let rounded = round_lp(&model, &x, seed);
            for (&v, &j) in verts.iter().zip(&guess) {
                prop_assert_eq!(rounded[v], j);
            }
        }
    }

    #[test]
    fn repair_balances_with_few_moves(slots in prop::collection::vec(0..4usize, 1..30)) {
        let n = slots.len();
        let m = 4.min(n);
        let slots: Vec<usize> = slots.into_iter().map(|s| s % m).collect();
        let (sigma, moves) = repair_balance(m, &slots).unwrap();
        prop_assert!(sigma.is_balanced());
        let (_, hi) = strict_bounds(n, m);
        let mut count = vec![0usize; m];
        for &s in &slots {
            count[s] += 1;
        }
        let excess: usize = count.iter().map(|&c| c.saturating_sub(hi)).sum();
        let changed = (0..n).filter(|&v| sigma.bucket(v) != slots[v]).count();
        prop_assert!(moves >= excess);
        prop_assert_eq!(moves, changed);
    }

    #[test]
    fn extension_respects_buckets((pi, m) in (1..20usize).prop_flat_map(|n| (arb_perm(n), 1..=n))) {
        let sigma = bucket_from_permutation(&pi, m).unwrap();
        let ext = extend_to_permutation(&sigma);
        let n = pi.len();
        for u in 0..n {
            for v in 0..n {
                if sigma.bucket(u) < sigma.bucket(v) {
                    prop_assert!(ext.rank(u) < ext.rank(v));
                }
            }
        }
    }
}
