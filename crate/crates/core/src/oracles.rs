//! Exact cost functions and brute-force optima.
//!
//! These read instances through the unmetered `peek_*` path, so calling them
//! never changes a run's query counts.

use crate::bucket::BucketOrder;
use crate::error::{Error, Result};
use crate::exact::{best_clustering, best_order, DenseRelation};
use crate::instances::{Clustering, LabeledGraph, Permutation, Tournament};
use crate::problem::Problem;

pub const DEFAULT_BRUTE_FORCE_BITS: f64 = 24.0;
pub const DEFAULT_MFAST_CAP: usize = 10;

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Size of the symmetric difference between `E` and the clique-union graph of `c`.
pub fn kcc_cost(g: &LabeledGraph, c: &Clustering) -> Result<u64> {
    check_len(g.n(), c.len())?;
    let mut cost = 0;
    for v in 1..g.n() {
        for u in 0..v {
            cost += ((c.cluster_of(u) == c.cluster_of(v)) != g.peek_edge(u, v)) as u64;
        }
    }
    Ok(cost)
}

/// Per-vertex degree counts against a fixed clustering.
#[derive(Debug, Clone)]
pub struct VertexCostView {
    n: usize,
    k: usize,
    // neighbors / non-neighbors of v inside cluster j, excluding v
    plus: Vec<u64>,
    minus: Vec<u64>,
    plus_total: Vec<u64>,
    sizes: Vec<u64>,
    assign: Vec<usize>,
}

impl VertexCostView {
    pub fn new(g: &LabeledGraph, c: &Clustering) -> Result<Self> {
        check_len(g.n(), c.len())?;
        let (n, k) = (g.n(), c.k());
        let mut plus = vec![0u64; n * k];
        let mut minus = vec![0u64; n * k];
        for v in 0..n {
            for u in 0..n {
                if u != v {
                    let j = c.cluster_of(u);
                    if g.peek_edge(u, v) {
                        plus[v * k + j] += 1;
                    } else {
                        minus[v * k + j] += 1;
                    }
                }
            }
        }
        let plus_total = (0..n)
            .map(|v| plus[v * k..(v + 1) * k].iter().sum())
            .collect();
        let sizes = c.sizes().into_iter().map(|s| s as u64).collect();
        Ok(VertexCostView {
            n,
            k,
            plus,
            minus,
            plus_total,
            sizes,
            assign: c.assignment().to_vec(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn deg_plus(&self, v: usize, j: usize) -> u64 {
        self.plus[v * self.k + j]
    }

    pub fn deg_minus(&self, v: usize, j: usize) -> u64 {
        self.minus[v * self.k + j]
    }

    pub fn degout_plus(&self, v: usize, j: usize) -> u64 {
        self.plus_total[v] - self.deg_plus(v, j)
    }

    pub fn degout_minus(&self, v: usize, j: usize) -> u64 {
        let others = self.n as u64 - 1 - self.own_size(v, j);
        others - self.degout_plus(v, j)
    }

    // |C_j \ {v}|
    fn own_size(&self, v: usize, j: usize) -> u64 {
        self.sizes[j] - (self.assign[v] == j) as u64
    }

    /// Cost of `v` when moved to cluster `j`: non-edges inside plus edges leaving.
    pub fn cost(&self, v: usize, j: usize) -> u64 {
        self.deg_minus(v, j) + self.degout_plus(v, j)
    }

    /// Cost of `v` in its own cluster.
    pub fn own_cost(&self, v: usize) -> u64 {
        self.cost(v, self.assign[v])
    }
}

pub fn vertex_cost(g: &LabeledGraph, c: &Clustering, v: usize, j: usize) -> Result<u64> {
    check_len(g.n(), c.len())?;
    if j >= c.k() || v >= g.n() {
        return Err(Error::InvalidArgument(format!(
            "vertex {v} / cluster {j} out of range"
        )));
    }
    let mut cost = 0;
    for u in (0..g.n()).filter(|&u| u != v) {
        let inside = c.cluster_of(u) == j;
        cost += (inside != g.peek_edge(u, v)) as u64;
    }
    Ok(cost)
}

/// Number of arcs pointing backwards in the order `pi`.
pub fn mfast_cost(t: &Tournament, pi: &Permutation) -> Result<u64> {
    check_len(t.n(), pi.len())?;
    let mut cost = 0;
    for v in 1..t.n() {
        for u in 0..v {
            let forward = t.peek_arc(u, v);
            cost += ((pi.rank(u) < pi.rank(v)) != forward) as u64;
        }
    }
    Ok(cost)
}

/// Backward arcs between different buckets; same-bucket pairs are free.
pub fn mfast_bucket_cost(t: &Tournament, sigma: &BucketOrder) -> Result<u64> {
    check_len(t.n(), sigma.len())?;
    let mut cost = 0;
    for v in 1..t.n() {
        for u in 0..v {
            cost +=
                Problem::Mfast.pair_cost(sigma.bucket(u), sigma.bucket(v), t.peek_arc(u, v)) as u64;
        }
    }
    Ok(cost)
}

/// Exact optimum over all clusterings into at most `k` clusters, refusing
/// searches larger than `budget_bits` (`n log2 k`).
pub fn brute_force_kcc(g: &LabeledGraph, k: usize, budget_bits: f64) -> Result<(Clustering, u64)> {
    let d = DenseRelation::unit(Problem::Kcc, g.n(), |i, j| g.peek_edge(i, j));
    let (labels, cost) = best_clustering(&d, k, budget_bits)?;
    Ok((Clustering::new(k, labels)?, cost))
}

/// Exact optimum ordering for `n <= cap`.
pub fn brute_force_mfast(t: &Tournament, cap: usize) -> Result<(Permutation, u64)> {
    let d = DenseRelation::unit(Problem::Mfast, t.n(), |i, j| t.peek_arc(i, j));
    let (order, cost) = best_order(&d, cap)?;
    Ok((Permutation::from_order(order)?, cost))
}
