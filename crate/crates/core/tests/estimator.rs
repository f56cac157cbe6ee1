use qptas::estimator::{estimate_with_sample, sample_degrees, SampleClustering};
use qptas::instances::gen_planted_clustering;
use qptas::oracles::VertexCostView;
use qptas::{
    align_clusterings, draw_sample, estimate_vertex_costs, Clustering, Constants, PairOracle,
};

#[test]
fn draw_sample_frequencies() {
    let s = draw_sample(100, 10_000, 3).unwrap();
    let mut count = [0usize; 100];
    for &v in &s.items {
        count[v] += 1;
    }
    assert!(count.iter().all(|&c| (50..=150).contains(&c)), "{count:?}");
    assert_eq!(draw_sample(1, 5, 9).unwrap().items, vec![0; 5]);
    assert!(draw_sample(10, 0, 1).is_err());
}

#[test]
fn zero_noise_own_cluster_estimates_vanish() {
    let c = Constants::desk();
    let mut clean = 0;
    for seed in 0..100 {
        let (g, truth) = gen_planted_clustering(40, 2, 0.0, seed).unwrap();
        let truth = truth.clustering().unwrap();
        let table =
            estimate_with_sample(&g, 2, draw_sample(40, 60, seed).unwrap(), &c, seed).unwrap();
        let sc = &table.sample_clustering;
        let restricted: Vec<usize> = sc.vertices.iter().map(|&v| truth.cluster_of(v)).collect();
        let al = align_clusterings(
            &Clustering::new(2, restricted).unwrap(),
            &sc.as_clustering(),
        )
        .unwrap();
        let zero = (0..40).all(|v| table.get(v, al.mapping[truth.cluster_of(v)]) == 0.0);
        clean += zero as usize;
    }
    assert!(clean >= 99, "{clean}/100");
}

fn truth_on_sample(truth: &Clustering, vertices: Vec<usize>, mult: Vec<u64>) -> SampleClustering {
    let labels = vertices.iter().map(|&v| truth.cluster_of(v)).collect();
    SampleClustering {
        k: truth.k(),
        vertices,
        mult,
        labels,
        cost: 0,
        exhaustive: false,
    }
}

#[test]
fn sample_degrees_track_true_degrees() {
    let (n, k) = (200, 3);
    let mut within = 0;
    for seed in 0..40 {
        let (g, truth) = gen_planted_clustering(n, k, 0.1, seed).unwrap();
        let truth = truth.clustering().unwrap();
        let sample = draw_sample(n, 300, seed).unwrap();
        let (vertices, mult) = sample.distinct();
        let sc = truth_on_sample(truth, vertices, mult);
        let view = VertexCostView::new(&g, truth).unwrap();
        let s = sample.len() as f64;
        let bound = 3.0 * ((n * k * 8) as f64).ln().sqrt() / s.sqrt();
        let ok = (0..n).all(|v| {
            let d = sample_degrees(&g, &sc, v);
            (0..k).all(|j| {
                let close = |exact: u64, sampled: u64| {
                    (exact as f64 / n as f64 - sampled as f64 / s).abs() <= bound
                };
                close(view.deg_plus(v, j), d.plus[j])
                    && close(view.deg_minus(v, j), d.minus[j])
                    && close(view.degout_plus(v, j), d.out_plus(j))
                    && close(view.degout_minus(v, j), d.out_minus(j))
            })
        });
        within += ok as usize;
    }
    assert!(within >= 38, "{within}/40");
}

#[test]
fn induced_sample_partition_is_cheap() {
    let (n, k) = (200, 3);
    for seed in 0..20 {
        let (g, truth) = gen_planted_clustering(n, k, 0.05, seed).unwrap();
        let truth = truth.clustering().unwrap();
        let gamma = qptas::oracles::kcc_cost(&g, truth).unwrap() as f64 / (n * n) as f64;
        let sample = draw_sample(n, 150, seed).unwrap();
        let (vertices, mult) = sample.distinct();
        let sc = truth_on_sample(truth, vertices.clone(), mult.clone());
        let mut cost = 0u64;
        for b in 0..vertices.len() {
            for a in 0..b {
                let same = sc.labels[a] == sc.labels[b];
                if same != g.peek_edge(vertices[a], vertices[b]) {
                    cost += mult[a] * mult[b];
                }
            }
        }
        let s = sample.len() as f64;
        let err = 3.0 * ((n * k * 8) as f64).ln().sqrt() / s.sqrt();
        assert!(cost as f64 <= (gamma + err) * s * s, "seed {seed}: {cost}");
    }
}

#[test]
fn sample_size_follows_constants() {
    let c = Constants::desk();
    let (g, _) = gen_planted_clustering(100, 2, 0.1, 4).unwrap();
    let table = estimate_vertex_costs(&g, 2, 0.25, &c, 4).unwrap();
    assert_eq!(table.sample.len(), c.estimator_sample_size(100, 0.25));
}

#[test]
fn estimator_queries_stay_within_budget() {
    let (g, _) = gen_planted_clustering(150, 3, 0.1, 2).unwrap();
    let sample = draw_sample(150, 40, 2).unwrap();
    let t = sample.len() as u64;
    let table = estimate_with_sample(&g, 3, sample, &Constants::desk(), 2).unwrap();
    assert!(g.queries().dedup <= t * (t - 1) / 2 + 150 * t);
    assert!(table.tcost.iter().all(|&x| (0.0..=150.0).contains(&x)));
}
