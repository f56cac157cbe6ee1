//! Exhaustive and local-search solvers over a small materialized relation.
//!
//! Callers decide how the relation is read: the oracles module peeks at the
//! instance, algorithm modules materialize it through metered queries.

use rand::Rng;

use crate::error::{Error, Result};
use crate::instances::PairOracle;
use crate::problem::Problem;

/// Dense relation over `n` local vertices, each carrying a multiplicity weight.
#[derive(Debug, Clone)]
pub(crate) struct DenseRelation {
    n: usize,
    rel: Vec<bool>,
    weight: Vec<u64>,
}

impl DenseRelation {
    /// `f(i, j)` is called once per pair with `i < j`; the other direction is
    /// filled symmetrically for k-CC and antisymmetrically for MFAST.
    pub(crate) fn from_fn(
        problem: Problem,
        weight: Vec<u64>,
        mut f: impl FnMut(usize, usize) -> bool,
    ) -> Self {
        let n = weight.len();
        let mut rel = vec![false; n * n];
        for j in 1..n {
            for i in 0..j {
                let r = f(i, j);
                rel[i * n + j] = r;
                rel[j * n + i] = match problem {
                    Problem::Kcc => r,
                    Problem::Mfast => !r,
                };
            }
        }
        DenseRelation { n, rel, weight }
    }

    /// Reads every pair of `vertices` through the oracle (metered).
    pub(crate) fn from_oracle<O: PairOracle + ?Sized>(
        oracle: &O,
        problem: Problem,
        vertices: &[usize],
        weight: Vec<u64>,
    ) -> Self {
        debug_assert_eq!(vertices.len(), weight.len());
        Self::from_fn(problem, weight, |i, j| {
            oracle.relation(vertices[i], vertices[j])
        })
    }

    pub(crate) fn unit(problem: Problem, n: usize, f: impl FnMut(usize, usize) -> bool) -> Self {
        Self::from_fn(problem, vec![1; n], f)
    }

    #[inline]
    fn rel(&self, i: usize, j: usize) -> bool {
        self.rel[i * self.n + j]
    }

    pub(crate) fn clustering_cost(&self, labels: &[usize]) -> u64 {
        let mut cost = 0;
        for j in 1..self.n {
            for i in 0..j {
                if (labels[i] == labels[j]) != self.rel(i, j) {
                    cost += self.weight[i] * self.weight[j];
                }
            }
        }
        cost
    }
}

fn check_budget(n: usize, k: usize, budget_bits: f64) -> Result<()> {
    let bits = n as f64 * (k as f64).log2();
    if bits > budget_bits {
        return Err(Error::BudgetExceeded {
            bits,
            budget: budget_bits,
        });
    }
    Ok(())
}

/// Optimal weighted clustering into at most `k` clusters.
///
/// Enumerates restricted-growth labelings (vertex 0 in cluster 0, each new
/// cluster opened with the next free index), so every partition is visited
/// once. Among optimal labelings the lexicographically smallest wins.
pub(crate) fn best_clustering(
    d: &DenseRelation,
    k: usize,
    budget_bits: f64,
) -> Result<(Vec<usize>, u64)> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    check_budget(d.n, k, budget_bits)?;
    let n = d.n;
    if n == 0 {
        return Ok((Vec::new(), 0));
    }
    // prefix_edges[i] = sum_{j<i} w_j [edge(i, j)]
    let prefix_edges: Vec<u64> = (0..n)
        .map(|i| (0..i).filter(|&j| d.rel(i, j)).map(|j| d.weight[j]).sum())
        .collect();

    struct Search<'a> {
        d: &'a DenseRelation,
        k: usize,
        prefix_edges: Vec<u64>,
        labels: Vec<usize>,
        best: u64,
        best_labels: Vec<usize>,
    }

    impl Search<'_> {
        fn add_cost(&self, i: usize, c: usize) -> u64 {
            // w_i * (edges to earlier vertices + non-edges minus edges inside cluster c)
            let mut inside: i64 = 0;
            for j in 0..i {
                if self.labels[j] == c {
                    let w = self.d.weight[j] as i64;
                    inside += if self.d.rel(i, j) { -w } else { w };
                }
            }
            self.d.weight[i] * (self.prefix_edges[i] as i64 + inside) as u64
        }

        fn go(&mut self, i: usize, used: usize, cost: u64) {
            if cost >= self.best {
                return;
            }
            if i == self.d.n {
                self.best = cost;
                self.best_labels.clone_from(&self.labels);
                return;
            }
            let top = (used + 1).min(self.k);
            for c in 0..top {
                let add = self.add_cost(i, c);
                self.labels[i] = c;
                self.go(i + 1, used.max(c + 1), cost + add);
            }
        }
    }

    let mut s = Search {
        d,
        k,
        prefix_edges,
        labels: vec![0; n],
        best: u64::MAX,
        best_labels: vec![0; n],
    };
    s.go(1, 1, 0);
    Ok((s.best_labels, s.best))
}

/// Optimal weighted ordering by dynamic programming over vertex subsets.
/// Returns `order` (local vertex at each rank); ties resolve to the
/// lexicographically smallest optimal order.
pub(crate) fn best_order(d: &DenseRelation, cap: usize) -> Result<(Vec<usize>, u64)> {
    let n = d.n;
    if n > cap || n >= 26 {
        return Err(Error::CapExceeded { n, cap });
    }
    let full = (1usize << n) - 1;
    // cost of placing v right after the set `mask`
    let add = |v: usize, mask: usize| -> u64 {
        let mut c = 0;
        let mut m = mask;
        while m != 0 {
            let u = m.trailing_zeros() as usize;
            m &= m - 1;
            if d.rel(v, u) {
                c += d.weight[u] * d.weight[v];
            }
        }
        c
    };
    // g[mask] = optimal cost of ordering the complement after `mask`
    let mut g = vec![u64::MAX; full + 1];
    g[full] = 0;
    for mask in (0..full).rev() {
        let mut best = u64::MAX;
        for v in 0..n {
            if mask >> v & 1 == 0 {
                best = best.min(add(v, mask) + g[mask | 1 << v]);
            }
        }
        g[mask] = best;
    }
    let mut order = Vec::with_capacity(n);
    let mut mask = 0;
    while mask != full {
        let v = (0..n)
            .find(|&v| mask >> v & 1 == 0 && add(v, mask) + g[mask | 1 << v] == g[mask])
            .expect("optimal successor exists");
        order.push(v);
        mask |= 1 << v;
    }
    Ok((order, g[0]))
}

/// Best-improvement local search with random restarts; the first restart
/// starts from a greedy sequential assignment.
pub(crate) fn local_search_clustering<R: Rng>(
    d: &DenseRelation,
    k: usize,
    restarts: usize,
    rng: &mut R,
) -> (Vec<usize>, u64) {
    let n = d.n;
    let mut best: Option<(Vec<usize>, u64)> = None;
    for r in 0..restarts.max(1) {
        let mut labels = vec![0usize; n];
        if r == 0 {
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by_key(|&v| std::cmp::Reverse(d.weight[v]));
            let mut placed = vec![false; n];
            for &v in &order {
                let mut score = vec![0i64; k];
                for u in 0..n {
                    if placed[u] {
                        let w = d.weight[u] as i64;
                        score[labels[u]] += if d.rel(u, v) { -w } else { w };
                    }
                }
                labels[v] = argmin(&score);
                placed[v] = true;
            }
        } else {
            for l in labels.iter_mut() {
                *l = rng.random_range(0..k);
            }
        }
        improve(d, k, &mut labels);
        let cost = d.clustering_cost(&labels);
        if best.as_ref().is_none_or(|(_, c)| cost < *c) {
            best = Some((labels, cost));
        }
    }
    best.expect("at least one restart")
}

fn argmin(xs: &[i64]) -> usize {
    let mut best = 0;
    for (i, &x) in xs.iter().enumerate() {
        if x < xs[best] {
            best = i;
        }
    }
    best
}

/// Moves single vertices to their best cluster until no move helps.
fn improve(d: &DenseRelation, k: usize, labels: &mut [usize]) {
    let n = d.n;
    // acc[v * k + c] = sum over u != v in cluster c of w_u * (non-edge ? 1 : -1)
    let mut acc = vec![0i64; n * k];
    for v in 0..n {
        for u in 0..n {
            if u != v {
                let w = d.weight[u] as i64;
                acc[v * k + labels[u]] += if d.rel(u, v) { -w } else { w };
            }
        }
    }
    loop {
        let mut moved = false;
        for v in 0..n {
            let row = &acc[v * k..(v + 1) * k];
            let target = argmin(row);
            let from = labels[v];
            if row[target] < row[from] {
                labels[v] = target;
                moved = true;
                for u in 0..n {
                    if u != v {
                        let w = d.weight[v] as i64;
                        let delta = if d.rel(u, v) { -w } else { w };
                        acc[u * k + from] -= delta;
                        acc[u * k + target] += delta;
                    }
                }
            }
        }
        if !moved {
            break;
        }
    }
}
