//! Sampling estimator of every vertex's cost against every cluster slot, and
//! the cluster alignment used to compare clusterings up to renaming.

use std::fmt::Write as _;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::constants::Constants;
use crate::error::{Error, Result};
use crate::exact::{best_clustering, local_search_clustering, DenseRelation};
use crate::instances::{Clustering, MultiSample, PairOracle};
use crate::par::map_range;
use crate::problem::Problem;
use crate::rng::{stream_rng, Stream};

/// `size` i.i.d. uniform vertices of `0..n`, with repetitions.
pub fn draw_sample(n: usize, size: usize, seed: u64) -> Result<MultiSample> {
    if size == 0 || n == 0 {
        return Err(Error::InvalidArgument(
            "sample needs n >= 1 and size >= 1".into(),
        ));
    }
    let mut rng = stream_rng(seed, Stream::Sample);
    let items = (0..size).map(|_| rng.random_range(0..n)).collect();
    Ok(MultiSample { items, seed })
}

/// Clustering of the distinct sample vertices; duplicates share one label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleClustering {
    pub k: usize,
    pub vertices: Vec<usize>,
    pub mult: Vec<u64>,
    pub labels: Vec<usize>,
    /// Weighted disagreement count of the sample clustering on the sample.
    pub cost: u64,
    pub exhaustive: bool,
}

impl SampleClustering {
    pub fn label_of(&self, v: usize) -> Option<usize> {
        self.vertices.binary_search(&v).ok().map(|i| self.labels[i])
    }

    /// The labels as a clustering of the distinct sample vertices (in increasing id order).
    pub fn as_clustering(&self) -> Clustering {
        Clustering::new(self.k, self.labels.clone()).expect("labels below k")
    }

    pub fn sample_size(&self) -> u64 {
        self.mult.iter().sum()
    }
}

/// Optimal (or, beyond the enumeration budget, locally optimal) weighted
/// k-clustering of the sample's induced subgraph.
pub fn cluster_sample<O: PairOracle + ?Sized>(
    oracle: &O,
    k: usize,
    sample: &MultiSample,
    constants: &Constants,
    seed: u64,
) -> Result<SampleClustering> {
    let (vertices, mult) = sample.distinct();
    let d = DenseRelation::from_oracle(oracle, Problem::Kcc, &vertices, mult.clone());
    let bits = vertices.len() as f64 * (k as f64).log2();
    let exhaustive = bits <= constants.sample_enum_bits;
    let (labels, cost) = if exhaustive {
        best_clustering(&d, k, constants.sample_enum_bits)?
    } else {
        let mut rng = stream_rng(seed, Stream::LocalSearch);
        local_search_clustering(&d, k, constants.restarts(), &mut rng)
    };
    Ok(SampleClustering {
        k,
        vertices,
        mult,
        labels,
        cost,
        exhaustive,
    })
}

/// Multiplicity-weighted degrees of one vertex against the sample clustering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleDegrees {
    /// Sample neighbors of `v` in each slot.
    pub plus: Vec<u64>,
    /// Sample non-neighbors of `v` in each slot.
    pub minus: Vec<u64>,
}

impl SampleDegrees {
    pub fn out_plus(&self, j: usize) -> u64 {
        self.plus.iter().sum::<u64>() - self.plus[j]
    }

    pub fn out_minus(&self, j: usize) -> u64 {
        self.minus.iter().sum::<u64>() - self.minus[j]
    }
}

/// Reads `v` against every distinct sample vertex other than itself.
pub fn sample_degrees<O: PairOracle + ?Sized>(
    oracle: &O,
    sc: &SampleClustering,
    v: usize,
) -> SampleDegrees {
    let mut plus = vec![0u64; sc.k];
    let mut minus = vec![0u64; sc.k];
    for ((&u, &w), &j) in sc.vertices.iter().zip(&sc.mult).zip(&sc.labels) {
        if u == v {
            continue;
        }
        if oracle.relation(v, u) {
            plus[j] += w;
        } else {
            minus[j] += w;
        }
    }
    SampleDegrees { plus, minus }
}

/// `(deg_minus^S(v, j), degout_plus^S(v, j))`.
pub fn sample_degree_profile<O: PairOracle + ?Sized>(
    oracle: &O,
    sc: &SampleClustering,
    v: usize,
    j: usize,
) -> (u64, u64) {
    let d = sample_degrees(oracle, sc, v);
    (d.minus[j], d.out_plus(j))
}

/// Estimated cost of every vertex in every cluster slot.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CostTable {
    pub n: usize,
    pub k: usize,
    pub tcost: Vec<f64>,
    pub sample: MultiSample,
    pub sample_clustering: SampleClustering,
}

impl CostTable {
    #[inline]
    pub fn get(&self, v: usize, j: usize) -> f64 {
        self.tcost[v * self.k + j]
    }

    pub fn row(&self, v: usize) -> &[f64] {
        &self.tcost[v * self.k..(v + 1) * self.k]
    }

    /// Cheapest slot for `v`, lowest index on ties.
    pub fn argmin(&self, v: usize) -> usize {
        let row = self.row(v);
        let mut best = 0;
        for j in 1..self.k {
            if row[j] < row[best] {
                best = j;
            }
        }
        best
    }

    pub fn min(&self, v: usize) -> f64 {
        self.get(v, self.argmin(v))
    }

    /// Dense matrix, one line per vertex.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for v in 0..self.n {
            let line: Vec<String> = self.row(v).iter().map(|x| format!("{x:.4}")).collect();
            writeln!(out, "{}", line.join(" ")).unwrap();
        }
        out
    }
}

/// Draws `t` sample vertices, clusters them, and scores every vertex.
pub fn estimate_vertex_costs<O: PairOracle + ?Sized>(
    oracle: &O,
    k: usize,
    beta: f64,
    constants: &Constants,
    seed: u64,
) -> Result<CostTable> {
    if beta <= 0.0 || k == 0 {
        return Err(Error::InvalidArgument(format!(
            "need beta > 0 and k >= 1, got {beta}, {k}"
        )));
    }
    let t = constants.estimator_sample_size(oracle.len(), beta);
    let sample = draw_sample(oracle.len(), t, seed)?;
    estimate_with_sample(oracle, k, sample, constants, seed)
}

/// The estimator on a caller-supplied sample.
pub fn estimate_with_sample<O: PairOracle + ?Sized>(
    oracle: &O,
    k: usize,
    sample: MultiSample,
    constants: &Constants,
    seed: u64,
) -> Result<CostTable> {
    let n = oracle.len();
    let sc = cluster_sample(oracle, k, &sample, constants, seed)?;
    let scale = n as f64 / sample.len() as f64;
    let rows = map_range(n, |v| {
        let d = sample_degrees(oracle, &sc, v);
        let plus_total: u64 = d.plus.iter().sum();
        (0..k)
            .map(|j| scale * (d.minus[j] + plus_total - d.plus[j]) as f64)
            .collect::<Vec<_>>()
    });
    Ok(CostTable {
        n,
        k,
        tcost: rows.concat(),
        sample,
        sample_clustering: sc,
    })
}

/// Matching between the clusters of two clusterings of the same vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterAlignment {
    /// `mapping[a]` is the cluster of the second clustering matched to cluster `a` of the first.
    pub mapping: Vec<usize>,
    pub good_matches: Vec<(usize, usize)>,
    pub bad_matches: Vec<(usize, usize)>,
    /// `|A_a \ B_mapping[a]|` for every `a`.
    pub overlap_defects: Vec<usize>,
}

/// Mutual-argmax matching: every cluster points to the cluster of the other
/// side it overlaps most (lowest index on ties); mutual pairs are good
/// matches. Leftover clusters are paired greedily by overlap, then by index.
pub fn align_clusterings(a: &Clustering, b: &Clustering) -> Result<ClusterAlignment> {
    if a.k() != b.k() {
        return Err(Error::DimensionMismatch {
            expected: a.k(),
            found: b.k(),
        });
    }
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    let k = a.k();
    let mut inter = vec![vec![0usize; k]; k];
    for v in 0..a.len() {
        inter[a.cluster_of(v)][b.cluster_of(v)] += 1;
    }
    let argmax = |xs: &mut dyn Iterator<Item = usize>| {
        let mut best = (0, 0);
        for (i, x) in xs.enumerate() {
            if x > best.1 {
                best = (i, x);
            }
        }
        best.0
    };
    let best_b: Vec<usize> = (0..k)
        .map(|i| argmax(&mut inter[i].iter().copied()))
        .collect();
    let best_a: Vec<usize> = (0..k)
        .map(|j| argmax(&mut (0..k).map(|i| inter[i][j])))
        .collect();

    let mut mapping = vec![usize::MAX; k];
    let mut taken = vec![false; k];
    let mut good_matches = Vec::new();
    for i in 0..k {
        if best_a[best_b[i]] == i {
            mapping[i] = best_b[i];
            taken[best_b[i]] = true;
            good_matches.push((i, best_b[i]));
        }
    }
    let mut rest: Vec<(usize, usize)> = Vec::new();
    for i in (0..k).filter(|&i| mapping[i] == usize::MAX) {
        for j in (0..k).filter(|&j| !taken[j]) {
            rest.push((i, j));
        }
    }
    rest.sort_by_key(|&(i, j)| (std::cmp::Reverse(inter[i][j]), i, j));
    let mut bad_matches = Vec::new();
    for (i, j) in rest {
        if mapping[i] == usize::MAX && !taken[j] {
            mapping[i] = j;
            taken[j] = true;
            bad_matches.push((i, j));
        }
    }
    bad_matches.sort_unstable();
    let sizes = a.sizes();
    let overlap_defects = (0..k).map(|i| sizes[i] - inter[i][mapping[i]]).collect();
    Ok(ClusterAlignment {
        mapping,
        good_matches,
        bad_matches,
        overlap_defects,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{gen_planted_clustering, LabeledGraph};
    use crate::oracles::{brute_force_kcc, VertexCostView};

    #[test]
    fn sample_draws() {
        let s = draw_sample(1, 5, 42).unwrap();
        assert_eq!(s.items, vec![0; 5]);
        assert_eq!(
            draw_sample(100, 50, 3).unwrap(),
            draw_sample(100, 50, 3).unwrap()
        );
        assert!(draw_sample(10, 0, 1).is_err());
        let s = draw_sample(100, 10_000, 3).unwrap();
        let (_, mult) = s.distinct();
        assert_eq!(mult.len(), 100);
        assert!(mult.iter().all(|&m| (50..=150).contains(&m)));
    }

    #[test]
    fn full_sample_is_exact() {
        let c = Constants::desk();
        for seed in 0..10 {
            let (g, _) = gen_planted_clustering(8, 3, 0.25, seed).unwrap();
            let sample = MultiSample {
                items: (0..8).collect(),
                seed: 0,
            };
            let table = estimate_with_sample(&g, 3, sample, &c, seed).unwrap();
            let (best, _) = brute_force_kcc(&g, 3, 24.0).unwrap();
            let view = VertexCostView::new(&g, &best).unwrap();
            for v in 0..8 {
                for j in 0..3 {
                    assert_eq!(table.get(v, j), view.cost(v, j) as f64);
                }
            }
        }
    }

    #[test]
    fn query_count_is_exact() {
        let (g, _) = gen_planted_clustering(60, 2, 0.1, 1).unwrap();
        let table = estimate_vertex_costs(&g, 2, 0.3, &Constants::desk(), 4).unwrap();
        let d = table.sample_clustering.vertices.len() as u64;
        let t = table.sample.len() as u64;
        let pairs = |x: u64| x * x.saturating_sub(1) / 2;
        assert_eq!(g.queries().dedup, pairs(60) - pairs(60 - d));
        assert!(g.queries().dedup <= t * (t - 1) / 2 + 60 * t);
        assert!(table.tcost.iter().all(|&x| (0.0..=60.0).contains(&x)));
    }

    #[test]
    fn multiplicity_rule() {
        let g = LabeledGraph::from_edges(4, &[(0, 1)]).unwrap();
        let sample = MultiSample {
            items: vec![1, 1, 1, 0, 2],
            seed: 0,
        };
        let sc = cluster_sample(&g, 2, &sample, &Constants::desk(), 0).unwrap();
        let d = sample_degrees(&g, &sc, 0);
        let j = sc.label_of(1).unwrap();
        assert_eq!(d.plus[j], 3);
        let (minus, out_plus) = sample_degree_profile(&g, &sc, 0, j);
        assert_eq!(out_plus, 0);
        assert_eq!(minus, if sc.label_of(2) == Some(j) { 1 } else { 0 });
    }

    #[test]
    fn alignment_examples() {
        let a = Clustering::new(3, vec![0, 0, 1, 1, 2, 2]).unwrap();
        let al = align_clusterings(&a, &a).unwrap();
        assert_eq!(al.mapping, vec![0, 1, 2]);
        assert_eq!(al.good_matches.len(), 3);
        assert!(al.overlap_defects.iter().all(|&d| d == 0));
        let b = Clustering::new(3, vec![2, 2, 0, 0, 1, 1]).unwrap();
        let al = align_clusterings(&a, &b).unwrap();
        assert_eq!(al.mapping, vec![2, 0, 1]);
        assert!(al.overlap_defects.iter().all(|&d| d == 0));
        assert!(align_clusterings(&a, &Clustering::single(6)).is_err());
    }

    #[test]
    fn alignment_counts_moved_vertices() {
        let a = Clustering::new(3, (0..30).map(|v| v % 3).collect()).unwrap();
        let mut assign = a.assignment().to_vec();
        for v in [0, 3, 6] {
            assign[v] = 1;
        }
        let b = Clustering::new(3, assign).unwrap();
        let al = align_clusterings(&a, &b).unwrap();
        assert_eq!(*al.overlap_defects.iter().max().unwrap(), 3);
        let mut all: Vec<_> = al
            .good_matches
            .iter()
            .chain(&al.bad_matches)
            .map(|&(i, _)| i)
            .collect();
        all.sort_unstable();
        assert_eq!(all, vec![0, 1, 2]);
    }
}
