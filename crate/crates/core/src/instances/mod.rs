//! Instance representations and the query-counting input oracles.
//!
//! Every algorithm in this crate reads its input exclusively through
//! [`PairOracle::relation`], which is metered. The exact-cost oracles in
//! [`crate::oracles`] use the unmetered `peek_*` accessors instead so that
//! verification never pollutes the query accounting of a run.

mod generate;
mod io;

use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use generate::{gen_planted_clustering, gen_planted_tournament, GroundTruth, Planted};
pub use io::{
    load_instance, parse_clustering_sidecar, parse_instance, parse_permutation_sidecar,
    save_instance, sidecar_text, Instance,
};

/// Index of the unordered pair `{u, v}` in a packed lower triangle.
#[inline]
pub(crate) fn pair_index(u: usize, v: usize) -> usize {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    b * (b - 1) / 2 + a
}

#[inline]
pub(crate) fn num_pairs(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Snapshot of a query counter.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryCount {
    /// Every read, including repeats.
    pub raw: u64,
    /// Distinct pairs read at least once.
    pub dedup: u64,
}

impl QueryCount {
    pub fn since(self, earlier: QueryCount) -> QueryCount {
        QueryCount {
            raw: self.raw - earlier.raw,
            dedup: self.dedup - earlier.dedup,
        }
    }
}

/// Thread-safe raw and deduplicated pair-read counter.
#[derive(Debug)]
pub struct QueryCounter {
    raw: AtomicU64,
    dedup: AtomicU64,
    seen: Vec<AtomicU64>,
}

impl QueryCounter {
    pub fn new(n: usize) -> Self {
        let words = num_pairs(n).div_ceil(64);
        QueryCounter {
            raw: AtomicU64::new(0),
            dedup: AtomicU64::new(0),
            seen: (0..words).map(|_| AtomicU64::new(0)).collect(),
        }
    }

    #[inline]
    fn record(&self, idx: usize) {
        self.raw.fetch_add(1, Ordering::Relaxed);
        let bit = 1u64 << (idx % 64);
        let prev = self.seen[idx / 64].fetch_or(bit, Ordering::Relaxed);
        if prev & bit == 0 {
            self.dedup.fetch_add(1, Ordering::Relaxed);
        }
    }

    pub fn snapshot(&self) -> QueryCount {
        QueryCount {
            raw: self.raw.load(Ordering::Relaxed),
            dedup: self.dedup.load(Ordering::Relaxed),
        }
    }
}

/// Metered access to a pairwise input.
///
/// For a [`LabeledGraph`] the relation is "`{u, v}` is an edge"; for a
/// [`Tournament`] it is "`u → v`". Implementations must be cheap to call from
/// several threads at once.
pub trait PairOracle: Sync {
    fn len(&self) -> usize;

    /// Reads the relation of an ordered pair, counting the query. `u != v`.
    fn relation(&self, u: usize, v: usize) -> bool;

    fn queries(&self) -> QueryCount;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[inline]
fn get_bit(bits: &[u64], idx: usize) -> bool {
    bits[idx / 64] >> (idx % 64) & 1 == 1
}

#[inline]
fn set_bit(bits: &mut [u64], idx: usize, value: bool) {
    if value {
        bits[idx / 64] |= 1 << (idx % 64);
    } else {
        bits[idx / 64] &= !(1 << (idx % 64));
    }
}

/// Label of an unordered pair in a k-CC instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Label {
    Edge,
    NonEdge,
}

/// Undirected graph whose pair labels are read through a query counter.
#[derive(Debug)]
pub struct LabeledGraph {
    n: usize,
    bits: Vec<u64>,
    counter: QueryCounter,
}

impl LabeledGraph {
    /// Empty graph (all pairs non-edges).
    pub fn empty(n: usize) -> Self {
        LabeledGraph {
            n,
            bits: vec![0; num_pairs(n).div_ceil(64)],
            counter: QueryCounter::new(n),
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for &(u, v) in edges {
            g.set_edge(u, v, true)?;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for v in 1..n {
            for u in 0..v {
                set_bit(&mut g.bits, pair_index(u, v), true);
            }
        }
        g
    }

    pub fn set_edge(&mut self, u: usize, v: usize, edge: bool) -> Result<()> {
        self.check_pair(u, v)?;
        set_bit(&mut self.bits, pair_index(u, v), edge);
        Ok(())
    }

    fn check_pair(&self, u: usize, v: usize) -> Result<()> {
        if u == v {
            return Err(Error::SelfPair(u));
        }
        let hi = u.max(v);
        if hi >= self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: hi + 1,
            });
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Metered label read.
    pub fn query_label(&self, u: usize, v: usize) -> Result<Label> {
        self.check_pair(u, v)?;
        Ok(if self.relation(u, v) {
            Label::Edge
        } else {
            Label::NonEdge
        })
    }

    /// Unmetered read reserved for exact-cost oracles and I/O.
    pub fn peek_edge(&self, u: usize, v: usize) -> bool {
        debug_assert_ne!(u, v);
        get_bit(&self.bits, pair_index(u, v))
    }

    /// Copy of the labels with a zeroed query counter.
    pub fn fresh(&self) -> Self {
        LabeledGraph {
            n: self.n,
            bits: self.bits.clone(),
            counter: QueryCounter::new(self.n),
        }
    }

    pub fn edge_count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }
}

impl PartialEq for LabeledGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.bits == other.bits
    }
}

impl PairOracle for LabeledGraph {
    fn len(&self) -> usize {
        self.n
    }

    #[inline]
    fn relation(&self, u: usize, v: usize) -> bool {
        assert_ne!(u, v, "self pair queried");
        let idx = pair_index(u, v);
        self.counter.record(idx);
        get_bit(&self.bits, idx)
    }

    fn queries(&self) -> QueryCount {
        self.counter.snapshot()
    }
}

/// Tournament: exactly one orientation per pair, read through a query counter.
#[derive(Debug)]
pub struct Tournament {
    n: usize,
    // bit set for pair (a, b) with a < b means a -> b
    bits: Vec<u64>,
    counter: QueryCounter,
}

impl Tournament {
    /// Transitive tournament of the identity order: `u -> v` whenever `u < v`.
    pub fn transitive(n: usize) -> Self {
        let mut t = Tournament {
            n,
            bits: vec![0; num_pairs(n).div_ceil(64)],
            counter: QueryCounter::new(n),
        };
        for v in 1..n {
            for u in 0..v {
                set_bit(&mut t.bits, pair_index(u, v), true);
            }
        }
        t
    }

    /// Transitive tournament in which earlier vertices of `order` beat later ones.
    pub fn from_order(order: &[usize]) -> Result<Self> {
        let perm = Permutation::from_order(order.to_vec())?;
        let n = order.len();
        let mut t = Self::transitive(n);
        for v in 1..n {
            for u in 0..v {
                t.orient(u, v, perm.rank(u) < perm.rank(v));
            }
        }
        Ok(t)
    }

    /// Sets the orientation of `{u, v}` so that `u -> v` iff `forward`.
    pub(crate) fn orient(&mut self, u: usize, v: usize, forward: bool) {
        let a_beats_b = if u < v { forward } else { !forward };
        set_bit(&mut self.bits, pair_index(u, v), a_beats_b);
    }

    /// Points the pair from `winner` to `loser`.
    pub fn set_arc(&mut self, winner: usize, loser: usize) -> Result<()> {
        if winner == loser {
            return Err(Error::SelfPair(winner));
        }
        let hi = winner.max(loser);
        if hi >= self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: hi + 1,
            });
        }
        self.orient(winner, loser, true);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Metered read: `true` iff `u -> v`.
    pub fn query_direction(&self, u: usize, v: usize) -> Result<bool> {
        if u == v {
            return Err(Error::SelfPair(u));
        }
        let hi = u.max(v);
        if hi >= self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: hi + 1,
            });
        }
        Ok(self.relation(u, v))
    }

    /// Unmetered read reserved for exact-cost oracles and I/O.
    pub fn peek_arc(&self, u: usize, v: usize) -> bool {
        debug_assert_ne!(u, v);
        let a_beats_b = get_bit(&self.bits, pair_index(u, v));
        if u < v {
            a_beats_b
        } else {
            !a_beats_b
        }
    }

    pub fn fresh(&self) -> Self {
        Tournament {
            n: self.n,
            bits: self.bits.clone(),
            counter: QueryCounter::new(self.n),
        }
    }
}

impl PartialEq for Tournament {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.bits == other.bits
    }
}

impl PairOracle for Tournament {
    fn len(&self) -> usize {
        self.n
    }

    #[inline]
    fn relation(&self, u: usize, v: usize) -> bool {
        assert_ne!(u, v, "self pair queried");
        let idx = pair_index(u, v);
        self.counter.record(idx);
        let a_beats_b = get_bit(&self.bits, idx);
        if u < v {
            a_beats_b
        } else {
            !a_beats_b
        }
    }

    fn queries(&self) -> QueryCount {
        self.counter.snapshot()
    }
}

/// View of an oracle restricted to a vertex subset; local index `i` maps to
/// `vertices[i]`. Queries are charged to the parent's counter.
pub struct Restricted<'a, O: ?Sized> {
    parent: &'a O,
    vertices: Vec<usize>,
}

impl<'a, O: PairOracle + ?Sized> Restricted<'a, O> {
    pub fn new(parent: &'a O, vertices: Vec<usize>) -> Self {
        Restricted { parent, vertices }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }
}

impl<O: PairOracle + ?Sized> PairOracle for Restricted<'_, O> {
    fn len(&self) -> usize {
        self.vertices.len()
    }

    #[inline]
    fn relation(&self, u: usize, v: usize) -> bool {
        self.parent.relation(self.vertices[u], self.vertices[v])
    }

    fn queries(&self) -> QueryCount {
        self.parent.queries()
    }
}

/// Assignment of every vertex to one of `k` (possibly empty) clusters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clustering {
    k: usize,
    assign: Vec<usize>,
}

impl Clustering {
    pub fn new(k: usize, assign: Vec<usize>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        if let Some(&bad) = assign.iter().find(|&&c| c >= k) {
            return Err(Error::InvalidArgument(format!(
                "cluster index {bad} out of range for k={k}"
            )));
        }
        Ok(Clustering { k, assign })
    }

    pub fn single(n: usize) -> Self {
        Clustering {
            k: 1,
            assign: vec![0; n],
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.assign.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assign.is_empty()
    }

    #[inline]
    pub fn cluster_of(&self, v: usize) -> usize {
        self.assign[v]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assign
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &c in &self.assign {
            sizes[c] += 1;
        }
        sizes
    }

    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k];
        for (v, &c) in self.assign.iter().enumerate() {
            out[c].push(v);
        }
        out
    }

    /// Relabels clusters in order of first appearance.
    pub fn canonical(&self) -> Clustering {
        let mut map = vec![usize::MAX; self.k];
        let mut next = 0;
        let assign = self
            .assign
            .iter()
            .map(|&c| {
                if map[c] == usize::MAX {
                    map[c] = next;
                    next += 1;
                }
                map[c]
            })
            .collect();
        Clustering { k: self.k, assign }
    }

    /// True when both clusterings induce the same partition.
    pub fn same_partition(&self, other: &Clustering) -> bool {
        self.len() == other.len() && self.canonical().assign == other.canonical().assign
    }
}

/// Bijection from vertices to ranks `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Permutation {
    rank: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            rank: (0..n).collect(),
        }
    }

    pub fn from_ranks(rank: Vec<usize>) -> Result<Self> {
        let n = rank.len();
        let mut seen = vec![false; n];
        for &r in &rank {
            if r >= n || seen[r] {
                return Err(Error::InvalidArgument(
                    "ranks are not a bijection onto 0..n".into(),
                ));
            }
            seen[r] = true;
        }
        Ok(Permutation { rank })
    }

    /// `order[i]` is the vertex placed at rank `i`.
    pub fn from_order(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut rank = vec![usize::MAX; n];
        for (i, &v) in order.iter().enumerate() {
            if v >= n || rank[v] != usize::MAX {
                return Err(Error::InvalidArgument(
                    "order is not a permutation of 0..n".into(),
                ));
            }
            rank[v] = i;
        }
        Ok(Permutation { rank })
    }

    pub fn len(&self) -> usize {
        self.rank.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rank.is_empty()
    }

    #[inline]
    pub fn rank(&self, v: usize) -> usize {
        self.rank[v]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.rank
    }

    pub fn order(&self) -> Vec<usize> {
        let mut order = vec![0; self.rank.len()];
        for (v, &r) in self.rank.iter().enumerate() {
            order[r] = v;
        }
        order
    }

    pub fn reversed(&self) -> Permutation {
        let n = self.rank.len();
        Permutation {
            rank: self.rank.iter().map(|&r| n - 1 - r).collect(),
        }
    }
}

/// Multiset of i.i.d. uniform vertices, in draw order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiSample {
    pub items: Vec<usize>,
    pub seed: u64,
}

impl MultiSample {
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Distinct members in increasing order with their multiplicities.
    pub fn distinct(&self) -> (Vec<usize>, Vec<u64>) {
        let mut sorted = self.items.clone();
        sorted.sort_unstable();
        let mut verts: Vec<usize> = Vec::new();
        let mut mult: Vec<u64> = Vec::new();
        for v in sorted {
            if verts.last() == Some(&v) {
                *mult.last_mut().unwrap() += 1;
            } else {
                verts.push(v);
                mult.push(1);
            }
        }
        (verts, mult)
    }
}
