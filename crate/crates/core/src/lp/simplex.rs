//! Dense two-phase tableau simplex for `min c.x` subject to `x >= 0` and
//! one-sided rows.
//!
//! Pricing is Dantzig's rule; after a streak of degenerate pivots it falls
//! back to Bland's rule until the objective moves again, which rules out
//! cycling.

use super::{LpError, Sense};

pub const TOLERANCE: f64 = 1e-9;
const PIVOT_EPS: f64 = 1e-11;
const DEGENERATE_STREAK: usize = 30;

/// Sparse row: `(coefficients, sense, rhs)`.
pub type SparseRow = (Vec<(usize, f64)>, Sense, f64);

/// A standard-form problem over `n_vars` nonnegative variables.
#[derive(Debug, Clone, Default)]
pub struct DenseLp {
    pub n_vars: usize,
    pub rows: Vec<SparseRow>,
    pub objective: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseSolution {
    pub x: Vec<f64>,
    pub objective: f64,
}

struct Tableau {
    rows: usize,
    cols: usize,
    // rows x (cols + 1); the last column is the right-hand side
    a: Vec<f64>,
    basis: Vec<usize>,
    banned: Vec<bool>,
}

impl Tableau {
    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.a[i * (self.cols + 1) + j]
    }

    fn rhs(&self, i: usize) -> f64 {
        self.at(i, self.cols)
    }

    fn pivot(&mut self, r: usize, e: usize, d: &mut [f64]) {
        let w = self.cols + 1;
        let inv = 1.0 / self.at(r, e);
        let (before, rest) = self.a.split_at_mut(r * w);
        let (prow, after) = rest.split_at_mut(w);
        for x in prow.iter_mut() {
            *x *= inv;
        }
        prow[e] = 1.0;
        let nz: Vec<usize> = (0..w).filter(|&j| prow[j] != 0.0).collect();
        let update = |row: &mut [f64]| {
            let f = row[e];
            if f != 0.0 {
                for &j in &nz {
                    row[j] -= f * prow[j];
                }
                row[e] = 0.0;
            }
        };
        before.chunks_mut(w).for_each(update);
        after.chunks_mut(w).for_each(update);
        update(d);
        self.basis[r] = e;
    }

    /// Runs simplex iterations against the reduced-cost row `d`
    /// (`d[cols]` holds minus the objective value).
    fn optimize(&mut self, d: &mut [f64], max_iter: usize) -> Result<(), LpError> {
        let mut streak = 0usize;
        let mut iterations = 0usize;
        loop {
            let bland = streak >= DEGENERATE_STREAK;
            let mut enter = None;
            let mut best = -TOLERANCE;
            for (j, &dj) in d[..self.cols].iter().enumerate() {
                if self.banned[j] || dj >= best {
                    continue;
                }
                enter = Some(j);
                if bland {
                    break;
                }
                best = dj;
            }
            let Some(e) = enter else { return Ok(()) };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows {
                let a = self.at(i, e);
                if a > PIVOT_EPS {
                    let ratio = self.rhs(i).max(0.0) / a;
                    let better = match leave {
                        None => true,
                        Some((l, r)) => {
                            ratio < r - 1e-12
                                || (ratio <= r + 1e-12 && self.basis[i] < self.basis[l])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((r, ratio)) = leave else {
                return Err(LpError::Unbounded);
            };
            if ratio * d[e].abs() <= 1e-12 {
                streak += 1;
            } else {
                streak = 0;
            }
            self.pivot(r, e, d);
            iterations += 1;
            if iterations > max_iter {
                return Err(LpError::IterationLimit(max_iter));
            }
        }
    }
}

pub fn solve_dense(lp: &DenseLp) -> Result<DenseSolution, LpError> {
    let n = lp.n_vars;
    let m = lp.rows.len();
    // column layout: structural | slack/surplus per inequality row | artificial per Ge/Eq row
    let mut rows: Vec<SparseRow> = Vec::with_capacity(m);
    for (coeffs, sense, rhs) in &lp.rows {
        if *rhs < 0.0 {
            let flipped = match sense {
                Sense::Le => Sense::Ge,
                Sense::Ge => Sense::Le,
                Sense::Eq => Sense::Eq,
            };
            rows.push((
                coeffs.iter().map(|&(j, c)| (j, -c)).collect(),
                flipped,
                -rhs,
            ));
        } else {
            rows.push((coeffs.clone(), *sense, *rhs));
        }
    }
    let n_slack = rows.iter().filter(|r| r.1 != Sense::Eq).count();
    let n_art = rows.iter().filter(|r| r.1 != Sense::Le).count();
    let cols = n + n_slack + n_art;
    let w = cols + 1;
    let mut t = Tableau {
        rows: m,
        cols,
        a: vec![0.0; m * w],
        basis: vec![0; m],
        banned: vec![false; cols],
    };
    let mut is_art = vec![false; cols];
    let (mut next_slack, mut next_art) = (n, n + n_slack);
    let mut scale = 1.0f64;
    for (i, (coeffs, sense, rhs)) in rows.iter().enumerate() {
        let row = &mut t.a[i * w..(i + 1) * w];
        for &(j, c) in coeffs {
            row[j] += c;
        }
        row[cols] = *rhs;
        scale = scale.max(rhs.abs());
        match sense {
            Sense::Le => {
                row[next_slack] = 1.0;
                t.basis[i] = next_slack;
                next_slack += 1;
            }
            Sense::Ge => {
                row[next_slack] = -1.0;
                next_slack += 1;
                row[next_art] = 1.0;
                is_art[next_art] = true;
                t.basis[i] = next_art;
                next_art += 1;
            }
            Sense::Eq => {
                row[next_art] = 1.0;
                is_art[next_art] = true;
                t.basis[i] = next_art;
                next_art += 1;
            }
        }
    }
    let max_iter = 50 * (m + cols) + 1000;

    if n_art > 0 {
        let mut d = vec![0.0; w];
        for j in 0..cols {
            if is_art[j] {
                d[j] = 1.0;
            }
        }
        for i in 0..m {
            if is_art[t.basis[i]] {
                for (j, dj) in d.iter_mut().enumerate() {
                    *dj -= t.at(i, j);
                }
            }
        }
        t.optimize(&mut d, max_iter)?;
        if -d[cols] > TOLERANCE * (1.0 + scale) {
            return Err(LpError::Infeasible);
        }
        for i in 0..m {
            if is_art[t.basis[i]] {
                if let Some(j) = (0..cols).find(|&j| !is_art[j] && t.at(i, j).abs() > 1e-9) {
                    t.pivot(i, j, &mut d);
                }
            }
        }
        t.banned.copy_from_slice(&is_art);
    }

    let mut d = vec![0.0; w];
    d[..n].copy_from_slice(&lp.objective);
    for i in 0..m {
        let b = t.basis[i];
        let cb = if b < n { lp.objective[b] } else { 0.0 };
        if cb != 0.0 {
            for (j, dj) in d.iter_mut().enumerate() {
                *dj -= cb * t.at(i, j);
            }
        }
    }
    t.optimize(&mut d, max_iter)?;
    let mut x = vec![0.0; n];
    for i in 0..m {
        if t.basis[i] < n {
            x[t.basis[i]] = t.rhs(i).max(0.0);
        }
    }
    let objective = x.iter().zip(&lp.objective).map(|(a, b)| a * b).sum();
    Ok(DenseSolution { x, objective })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(n: usize, rows: Vec<SparseRow>, objective: Vec<f64>) -> DenseLp {
        DenseLp {
            n_vars: n,
            rows,
            objective,
        }
    }

    #[test]
    fn single_variable_bounds() {
        let p = lp(
            1,
            vec![
                (vec![(0, 1.0)], Sense::Ge, 3.0),
                (vec![(0, 1.0)], Sense::Le, 5.0),
            ],
            vec![1.0],
        );
        let s = solve_dense(&p).unwrap();
        assert!((s.x[0] - 3.0).abs() < 1e-9);
        let p = lp(
            1,
            vec![
                (vec![(0, 1.0)], Sense::Ge, 2.0),
                (vec![(0, 1.0)], Sense::Le, 1.0),
            ],
            vec![1.0],
        );
        assert_eq!(solve_dense(&p), Err(LpError::Infeasible));
    }

    #[test]
    fn unbounded_detected() {
        let p = lp(
            2,
            vec![(vec![(0, 1.0), (1, -1.0)], Sense::Le, 1.0)],
            vec![-1.0, 0.0],
        );
        assert_eq!(solve_dense(&p), Err(LpError::Unbounded));
    }

    #[test]
    fn textbook_problem() {
        // max 3x + 5y st x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36
        let p = lp(
            2,
            vec![
                (vec![(0, 1.0)], Sense::Le, 4.0),
                (vec![(1, 2.0)], Sense::Le, 12.0),
                (vec![(0, 3.0), (1, 2.0)], Sense::Le, 18.0),
            ],
            vec![-3.0, -5.0],
        );
        let s = solve_dense(&p).unwrap();
        assert!((s.objective + 36.0).abs() < 1e-9);
        assert!((s.x[0] - 2.0).abs() < 1e-9 && (s.x[1] - 6.0).abs() < 1e-9);
    }

    #[test]
    fn equality_and_negative_rhs() {
        // x + y = 1, x - y <= -0.5, min x
        let p = lp(
            2,
            vec![
                (vec![(0, 1.0), (1, 1.0)], Sense::Eq, 1.0),
                (vec![(0, 1.0), (1, -1.0)], Sense::Le, -0.5),
            ],
            vec![1.0, 0.0],
        );
        let s = solve_dense(&p).unwrap();
        assert!(s.x[0].abs() < 1e-9 && (s.x[1] - 1.0).abs() < 1e-9);
    }
}
