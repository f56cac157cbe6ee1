//! Seeded planted-instance generators.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{pair_index, set_bit, Clustering, LabeledGraph, Permutation, Tournament};
use crate::error::{Error, Result};
use crate::rng::{stream_rng, Stream};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Planted {
    Clustering(Clustering),
    Permutation(Permutation),
}

/// Planted solution of a generated instance together with its noise record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub planted: Planted,
    pub noise_rate: f64,
    /// Pairs whose label or direction was flipped; equals the planted cost.
    pub flipped_pairs: usize,
}

impl GroundTruth {
    pub fn clustering(&self) -> Option<&Clustering> {
        match &self.planted {
            Planted::Clustering(c) => Some(c),
            Planted::Permutation(_) => None,
        }
    }

    pub fn permutation(&self) -> Option<&Permutation> {
        match &self.planted {
            Planted::Permutation(p) => Some(p),
            Planted::Clustering(_) => None,
        }
    }
}

fn check_rate(rate: f64, name: &str) -> Result<()> {
    if !(0.0..=1.0).contains(&rate) {
        return Err(Error::InvalidArgument(format!(
            "{name} must lie in [0, 1], got {rate}"
        )));
    }
    Ok(())
}

/// Clique-union graph of a random balanced `k`-clustering with every pair
/// label flipped independently with probability `noise_rate`.
pub fn gen_planted_clustering(
    n: usize,
    k: usize,
    noise_rate: f64,
    seed: u64,
) -> Result<(LabeledGraph, GroundTruth)> {
    check_rate(noise_rate, "noise rate")?;
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= k <= n, got k={k}, n={n}"
        )));
    }
    let mut rng = stream_rng(seed, Stream::Generator);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut assign = vec![0; n];
    for (pos, &v) in order.iter().enumerate() {
        assign[v] = pos % k;
    }
    let mut g = LabeledGraph::empty(n);
    let mut flipped = 0;
    for v in 1..n {
        for u in 0..v {
            let flip = rng.random::<f64>() < noise_rate;
            let same = assign[u] == assign[v];
            flipped += flip as usize;
            set_bit(&mut g.bits, pair_index(u, v), same != flip);
        }
    }
    let truth = GroundTruth {
        planted: Planted::Clustering(Clustering::new(k, assign)?),
        noise_rate,
        flipped_pairs: flipped,
    };
    Ok((g, truth))
}

/// Transitive tournament of a random permutation with every pair's direction
/// flipped independently with probability `flip_rate`.
pub fn gen_planted_tournament(
    n: usize,
    flip_rate: f64,
    seed: u64,
) -> Result<(Tournament, GroundTruth)> {
    check_rate(flip_rate, "flip rate")?;
    let mut rng = stream_rng(seed, Stream::Generator);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let perm = Permutation::from_order(order)?;
    let mut t = Tournament::transitive(n);
    let mut flipped = 0;
    for v in 1..n {
        for u in 0..v {
            let flip = rng.random::<f64>() < flip_rate;
            flipped += flip as usize;
            let forward = perm.rank(u) < perm.rank(v);
            t.orient(u, v, forward != flip);
        }
    }
    let truth = GroundTruth {
        planted: Planted::Permutation(perm),
        noise_rate: flip_rate,
        flipped_pairs: flipped,
    };
    Ok((t, truth))
}
