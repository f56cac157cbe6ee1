//! m-bucket orderings and the sampled cost functionals used to score them.
//!
//! The estimators are written over plain slot vectors so that the k-CC
//! high-cost pipeline can reuse them with cluster indices as slots.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instances::{MultiSample, PairOracle, Permutation};
use crate::par::map_range;
use crate::problem::Problem;
use crate::rng::{derive_seed, stream_rng, Stream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BalanceMode {
    /// Every bucket holds between `n/2m` and `2n/m` vertices.
    StrictBucket,
    /// Bounds not guaranteed (a single moved vertex, or an unrepaired rounding).
    BucketStar,
}

/// Map from vertices to ordered buckets `0..m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BucketOrder {
    m: usize,
    sigma: Vec<usize>,
    mode: BalanceMode,
}

/// Strict size bounds `ceil(n/2m) ..= floor(2n/m)`.
pub fn strict_bounds(n: usize, m: usize) -> (usize, usize) {
    ((n).div_ceil(2 * m), 2 * n / m)
}

impl BucketOrder {
    /// Validates indices; the mode is strict exactly when the bounds hold.
    pub fn new(m: usize, sigma: Vec<usize>) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("m must be at least 1".into()));
        }
        if let Some(&bad) = sigma.iter().find(|&&b| b >= m) {
            return Err(Error::InvalidArgument(format!(
                "bucket {bad} out of range for m={m}"
            )));
        }
        let mut order = BucketOrder {
            m,
            sigma,
            mode: BalanceMode::BucketStar,
        };
        if order.is_balanced() {
            order.mode = BalanceMode::StrictBucket;
        }
        Ok(order)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    #[inline]
    pub fn bucket(&self, v: usize) -> usize {
        self.sigma[v]
    }

    pub fn buckets(&self) -> &[usize] {
        &self.sigma
    }

    pub fn mode(&self) -> BalanceMode {
        self.mode
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.m];
        for &b in &self.sigma {
            sizes[b] += 1;
        }
        sizes
    }

    pub fn is_balanced(&self) -> bool {
        let (lo, hi) = strict_bounds(self.len(), self.m);
        self.sizes().iter().all(|&s| (lo..=hi).contains(&s))
    }
}

/// Contiguous rank blocks of sizes `floor(n/m)` or `ceil(n/m)`.
pub fn bucket_from_permutation(pi: &Permutation, m: usize) -> Result<BucketOrder> {
    let n = pi.len();
    if m == 0 || m > n {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= m <= n, got m={m}, n={n}"
        )));
    }
    let sigma = pi.ranks().iter().map(|&r| r * m / n).collect();
    BucketOrder::new(m, sigma)
}

/// `sigma` with `u` moved to bucket `i`.
pub fn move_vertex(sigma: &BucketOrder, u: usize, i: usize) -> Result<BucketOrder> {
    if i >= sigma.m || u >= sigma.len() {
        return Err(Error::InvalidArgument(format!(
            "vertex {u} / bucket {i} out of range"
        )));
    }
    let mut out = sigma.clone();
    out.sigma[u] = i;
    out.mode = BalanceMode::BucketStar;
    Ok(out)
}

/// `cost^{u,v}(sigma)`: 1 when the pair sits in different buckets against its arc.
pub fn pair_cost<O: PairOracle + ?Sized>(
    oracle: &O,
    u: usize,
    v: usize,
    sigma: &BucketOrder,
) -> bool {
    if u == v || sigma.bucket(u) == sigma.bucket(v) {
        return false;
    }
    Problem::Mfast.pair_cost(sigma.bucket(u), sigma.bucket(v), oracle.relation(u, v))
}

/// Within-bucket ties broken by vertex id.
pub fn extend_to_permutation(sigma: &BucketOrder) -> Permutation {
    let mut order: Vec<usize> = (0..sigma.len()).collect();
    order.sort_by_key(|&v| (sigma.bucket(v), v));
    Permutation::from_order(order).expect("sorted vertex ids form a permutation")
}

/// Independent per-vertex samples `S^u`, each of size `p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleEnsemble {
    pub p: usize,
    pub per_vertex: Vec<Vec<usize>>,
    pub seed: u64,
}

impl SampleEnsemble {
    pub fn draw(n: usize, p: usize, seed: u64) -> Result<Self> {
        if p == 0 || n == 0 {
            return Err(Error::InvalidArgument(
                "ensemble needs n >= 1 and p >= 1".into(),
            ));
        }
        let per_vertex = (0..n)
            .map(|u| {
                let mut rng = stream_rng(derive_seed(seed, u as u64), Stream::Ensemble);
                (0..p).map(|_| rng.random_range(0..n)).collect()
            })
            .collect();
        Ok(SampleEnsemble {
            p,
            per_vertex,
            seed,
        })
    }

    /// Every vertex of `0..n` listed `reps` times in every `S^u`.
    pub fn full(n: usize, reps: usize) -> Self {
        let items: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, reps)).collect();
        SampleEnsemble {
            p: items.len(),
            per_vertex: vec![items; n],
            seed: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.per_vertex.len()
    }

    pub fn is_empty(&self) -> bool {
        self.per_vertex.is_empty()
    }
}

/// Relations `rel(u, w)` for every member `w` of the list attached to `u`,
/// read once so that many candidate orderings can be scored without requerying.
/// Self pairs are recorded as `false` and never queried.
#[derive(Debug, Clone)]
pub(crate) struct SampledRelations {
    pub(crate) lists: Vec<Vec<usize>>,
    pub(crate) rel: Vec<Vec<bool>>,
}

impl SampledRelations {
    pub(crate) fn read<O: PairOracle + ?Sized>(oracle: &O, lists: Vec<Vec<usize>>) -> Self {
        let rel = map_range(lists.len(), |u| {
            lists[u]
                .iter()
                .map(|&w| w != u && oracle.relation(u, w))
                .collect()
        });
        SampledRelations { lists, rel }
    }

    /// `(scale) * sum_i pair_cost(slot_u, slot(w_i))` over the list of `u`.
    pub(crate) fn vertex_term(
        &self,
        problem: Problem,
        u: usize,
        slot_u: usize,
        slots: &[usize],
        scale: f64,
    ) -> f64 {
        let mut bad = 0u64;
        for (&w, &r) in self.lists[u].iter().zip(&self.rel[u]) {
            if w != u {
                bad += problem.pair_cost(slot_u, slots[w], r) as u64;
            }
        }
        scale * bad as f64
    }

    pub(crate) fn total(&self, problem: Problem, slots: &[usize], scale: f64) -> f64 {
        (0..self.lists.len())
            .map(|u| self.vertex_term(problem, u, slots[u], slots, scale))
            .sum()
    }
}

fn sample_term<O: PairOracle + ?Sized>(
    oracle: &O,
    problem: Problem,
    u: usize,
    slot_u: usize,
    items: &[usize],
    slots: &[usize],
) -> f64 {
    let n = oracle.len() as f64;
    let bad: u64 = items
        .iter()
        .filter(|&&w| w != u)
        .map(|&w| problem.pair_cost(slot_u, slots[w], oracle.relation(u, w)) as u64)
        .sum();
    n / (2.0 * items.len() as f64) * bad as f64
}

/// `cost^{u,S}` of the ordering `slots` with `u` placed in `slot_u`.
/// Only `slots[w]` for `w` in the sample is read.
pub fn cost_u_sample<O: PairOracle + ?Sized>(
    oracle: &O,
    problem: Problem,
    u: usize,
    slot_u: usize,
    slots: &[usize],
    sample: &MultiSample,
) -> f64 {
    sample_term(oracle, problem, u, slot_u, &sample.items, slots)
}

/// `cost^S = sum_u cost^{u,S}`; an unbiased estimate of the exact cost.
pub fn cost_sample<O: PairOracle + ?Sized>(
    oracle: &O,
    problem: Problem,
    slots: &[usize],
    sample: &MultiSample,
) -> f64 {
    map_range(slots.len(), |u| {
        cost_u_sample(oracle, problem, u, slots[u], slots, sample)
    })
    .into_iter()
    .sum()
}

/// `cost^{u,ensemble}` of `slots` with `u` placed in `slot_u`.
pub fn cost_u_ensemble<O: PairOracle + ?Sized>(
    oracle: &O,
    problem: Problem,
    u: usize,
    slot_u: usize,
    slots: &[usize],
    ensemble: &SampleEnsemble,
) -> f64 {
    sample_term(oracle, problem, u, slot_u, &ensemble.per_vertex[u], slots)
}

pub fn cost_ensemble<O: PairOracle + ?Sized>(
    oracle: &O,
    problem: Problem,
    slots: &[usize],
    ensemble: &SampleEnsemble,
) -> f64 {
    map_range(slots.len(), |u| {
        cost_u_ensemble(oracle, problem, u, slots[u], slots, ensemble)
    })
    .into_iter()
    .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{gen_planted_tournament, Tournament};
    use crate::oracles::{mfast_bucket_cost, mfast_cost};

    #[test]
    fn blocks_from_permutation() {
        let s = bucket_from_permutation(&Permutation::identity(6), 3).unwrap();
        assert_eq!(s.buckets(), &[0, 0, 1, 1, 2, 2]);
        assert_eq!(s.mode(), BalanceMode::StrictBucket);
        let s = bucket_from_permutation(&Permutation::identity(5), 1).unwrap();
        assert_eq!(s.buckets(), &[0; 5]);
        assert!(bucket_from_permutation(&Permutation::identity(3), 4).is_err());
        let (t, truth) = gen_planted_tournament(9, 0.3, 4).unwrap();
        let pi = truth.permutation().unwrap();
        let s = bucket_from_permutation(pi, 9).unwrap();
        assert_eq!(s.buckets(), pi.ranks());
        assert_eq!(
            mfast_bucket_cost(&t, &s).unwrap(),
            mfast_cost(&t, pi).unwrap()
        );
        assert_eq!(&extend_to_permutation(&s), pi);
    }

    #[test]
    fn pair_cost_cases() {
        let t = Tournament::from_order(&[1, 0, 2]).unwrap();
        let s = BucketOrder::new(2, vec![0, 0, 1]).unwrap();
        assert!(!pair_cost(&t, 0, 1, &s));
        let s = BucketOrder::new(3, vec![0, 1, 2]).unwrap();
        assert!(pair_cost(&t, 0, 1, &s));
        assert!(!pair_cost(&t, 0, 2, &s));
    }

    #[test]
    fn moves() {
        let s = BucketOrder::new(3, vec![0, 1, 2]).unwrap();
        assert_eq!(move_vertex(&s, 1, 1).unwrap().buckets(), s.buckets());
        let moved = move_vertex(&s, 2, 0).unwrap();
        assert_eq!(moved.sizes(), vec![2, 1, 0]);
        assert_eq!(moved.mode(), BalanceMode::BucketStar);
    }

    #[test]
    fn move_delta_matches_vertex_terms() {
        // exact cost^u(sigma) = 1/2 sum_v cost^{u,v}
        for seed in 0..5 {
            let (t, _) = gen_planted_tournament(7, 0.4, seed).unwrap();
            let s = BucketOrder::new(3, vec![0, 1, 2, 0, 1, 2, 1]).unwrap();
            let cost_u = |sig: &BucketOrder, u: usize| -> f64 {
                (0..7).filter(|&v| pair_cost(&t, u, v, sig)).count() as f64 / 2.0
            };
            let base = mfast_bucket_cost(&t, &s).unwrap() as f64;
            for u in 0..7 {
                for i in 0..3 {
                    let moved = move_vertex(&s, u, i).unwrap();
                    let delta = mfast_bucket_cost(&t, &moved).unwrap() as f64 - base;
                    assert_eq!(delta, 2.0 * (cost_u(&moved, u) - cost_u(&s, u)));
                }
            }
        }
    }

    #[test]
    fn estimators_collapse_on_uniform_samples() {
        let (t, _) = gen_planted_tournament(12, 0.3, 2).unwrap();
        let s = BucketOrder::new(3, (0..12).map(|v| (v * 7) % 3).collect()).unwrap();
        let exact = mfast_bucket_cost(&t, &s).unwrap() as f64;
        let sample = MultiSample {
            items: (0..12).flat_map(|v| [v, v]).collect(),
            seed: 0,
        };
        let est = cost_sample(&t, Problem::Mfast, s.buckets(), &sample);
        assert!((est - exact).abs() < 1e-9);
        let ens = SampleEnsemble::full(12, 3);
        let est = cost_ensemble(&t, Problem::Mfast, s.buckets(), &ens);
        assert!((est - exact).abs() < 1e-9);
        let cached = SampledRelations::read(&t, ens.per_vertex.clone());
        assert!((cached.total(Problem::Mfast, s.buckets(), 12.0 / 72.0) - exact).abs() < 1e-9);
    }

    #[test]
    fn self_copies_contribute_nothing() {
        let t = Tournament::transitive(5);
        let s = BucketOrder::new(2, vec![1, 0, 0, 1, 1]).unwrap();
        let sample = MultiSample {
            items: vec![3, 3, 3],
            seed: 0,
        };
        assert_eq!(
            cost_u_sample(&t, Problem::Mfast, 3, 0, s.buckets(), &sample),
            0.0
        );
        assert_eq!(t.queries().raw, 0);
        let ens = SampleEnsemble::draw(5, 4, 9).unwrap();
        assert_eq!(
            cost_ensemble(&t, Problem::Mfast, &[0, 0, 1, 1, 1], &ens),
            0.0
        );
        assert_eq!(ens, SampleEnsemble::draw(5, 4, 9).unwrap());
    }
}
