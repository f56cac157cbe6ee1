use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{FractionalSolution, LpModel, RowKind};
use crate::bucket::{strict_bounds, BucketOrder};
use crate::error::Result;
use crate::rng::{stream_rng, Stream};

/// Draws a slot for every free vertex from its fractional row; hardwired
/// vertices keep their slot and consume no randomness.
pub fn round_lp(model: &LpModel, x: &FractionalSolution, seed: u64) -> Vec<usize> {
    let m = model.slots;
    let mut rng = stream_rng(seed, Stream::Rounding);
    (0..model.n)
        .map(|v| {
            if let Some(j) = model.fixed[v] {
                return j;
            }
            let row: Vec<f64> = x.values[v * m..(v + 1) * m]
                .iter()
                .map(|p| p.max(0.0))
                .collect();
            let total: f64 = row.iter().sum();
            let mut u = rng.random::<f64>() * total;
            for (j, &p) in row.iter().enumerate() {
                if u < p {
                    return j;
                }
                u -= p;
            }
            // rounding slack lands on the last positive entry
            row.iter().rposition(|&p| p > 0.0).unwrap_or(0)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowCertificate {
    pub row: usize,
    pub kind: RowKind,
    pub violation: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub eta: f64,
    pub rows: Vec<RowCertificate>,
    pub all_pass: bool,
}

impl Certificate {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| !r.pass).count()
    }
}

/// Checks every row of the rounded point against `linf * sqrt(l0 * ln(1/eta))`.
pub fn certify_rounding(
    model: &LpModel,
    _x: &FractionalSolution,
    candidate: &[usize],
    eta: f64,
) -> Certificate {
    let point = model.point(candidate);
    let log = (1.0 / eta).ln().max(0.0);
    let rows: Vec<RowCertificate> = model
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let violation = r.violation(&point);
            let bound = r.linf * (r.l0 as f64 * log).sqrt();
            RowCertificate {
                row: i,
                kind: r.kind,
                violation,
                bound,
                pass: violation <= bound + 1e-9,
            }
        })
        .collect();
    let all_pass = rows.iter().all(|r| r.pass);
    Certificate {
        eta,
        rows,
        all_pass,
    }
}

/// Moves the fewest vertices needed for every bucket to hold between
/// `ceil(n/2m)` and `floor(2n/m)` vertices: repeatedly from the largest
/// bucket to the smallest, lowest vertex id first. Returns the number of moves.
pub fn repair_balance(m: usize, slots: &[usize]) -> Result<(BucketOrder, usize)> {
    let n = slots.len();
    let mut sigma = slots.to_vec();
    let (lo, hi) = strict_bounds(n, m.min(n.max(1)));
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (v, &b) in sigma.iter().enumerate() {
        members[b].push(v);
    }
    let mut moves = 0;
    if m <= n {
        loop {
            let sizes: Vec<usize> = members.iter().map(Vec::len).collect();
            let over = sizes.iter().any(|&s| s > hi);
            let under = sizes.iter().any(|&s| s < lo);
            if !over && !under {
                break;
            }
            let from = (0..m).fold(0, |b, i| if sizes[i] > sizes[b] { i } else { b });
            let to = (0..m).fold(0, |b, i| if sizes[i] < sizes[b] { i } else { b });
            // lowest id of the source bucket
            let v = members[from].remove(0);
            sigma[v] = to;
            let pos = members[to].partition_point(|&u| u < v);
            members[to].insert(pos, v);
            moves += 1;
        }
    }
    Ok((BucketOrder::new(m, sigma)?, moves))
}
