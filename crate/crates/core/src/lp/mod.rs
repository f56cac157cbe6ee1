//! Assignment LP over variables `x[v][j]` (vertex `v` in slot `j`): model
//! construction from the two samples, a self-contained solver, randomized
//! rounding, rounding certification and balance repair.

mod rounding;
pub mod simplex;

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bucket::{SampleEnsemble, SampledRelations};
use crate::constants::Constants;
use crate::error::{Error, Result};
use crate::instances::{MultiSample, PairOracle};
use crate::problem::Problem;
use simplex::{solve_dense, DenseLp, TOLERANCE};

pub use rounding::{certify_rounding, repair_balance, round_lp, Certificate, RowCertificate};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LpError {
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("simplex exceeded {0} iterations")]
    IterationLimit(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RowKind {
    /// `sum_j x[v][j] = 1`.
    Simplex { v: usize },
    /// Lower or upper size bound of one bucket.
    Balance { slot: usize, upper: bool },
    /// One side of `|cost^{u,S}(u->i) - cost^{u,ensemble}(u->i)| <= b`.
    Crux { u: usize, i: usize, upper: bool },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub coeffs: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
    pub kind: RowKind,
    /// Number of vertices with a nonzero coefficient.
    pub l0: usize,
    /// Largest absolute coefficient.
    pub linf: f64,
}

impl Row {
    fn new(coeffs: Vec<(usize, f64)>, sense: Sense, rhs: f64, kind: RowKind, slots: usize) -> Self {
        let mut verts: Vec<usize> = coeffs
            .iter()
            .filter(|c| c.1 != 0.0)
            .map(|c| c.0 / slots)
            .collect();
        verts.sort_unstable();
        verts.dedup();
        let linf = coeffs.iter().map(|c| c.1.abs()).fold(0.0, f64::max);
        Row {
            coeffs,
            sense,
            rhs,
            kind,
            l0: verts.len(),
            linf,
        }
    }

    pub fn activity(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().map(|&(j, c)| c * x[j]).sum()
    }

    /// Amount by which `x` misses the row (0 when satisfied).
    pub fn violation(&self, x: &[f64]) -> f64 {
        let a = self.activity(x);
        match self.sense {
            Sense::Le => (a - self.rhs).max(0.0),
            Sense::Ge => (self.rhs - a).max(0.0),
            Sense::Eq => (a - self.rhs).abs(),
        }
    }

    pub fn is_crux(&self) -> bool {
        matches!(self.kind, RowKind::Crux { .. })
    }
}

/// LP with variable `v * slots + j` for vertex `v` in slot `j`, all `>= 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpModel {
    pub n: usize,
    pub slots: usize,
    /// Hardwired slot of each sampled vertex.
    pub fixed: Vec<Option<usize>>,
    pub rows: Vec<Row>,
    pub objective: Vec<f64>,
}

/// Optimal point of an [`LpModel`], including hardwired variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FractionalSolution {
    pub values: Vec<f64>,
    pub objective_value: f64,
}

impl FractionalSolution {
    pub fn value(&self, slots: usize, v: usize, j: usize) -> f64 {
        self.values[v * slots + j]
    }
}

impl LpModel {
    pub fn n_vars(&self) -> usize {
        self.n * self.slots
    }

    pub fn count(&self, pred: impl Fn(&RowKind) -> bool) -> usize {
        self.rows.iter().filter(|r| pred(&r.kind)).count()
    }

    /// Indicator vector of an integral assignment.
    pub fn point(&self, slots_of: &[usize]) -> Vec<f64> {
        let mut x = vec![0.0; self.n_vars()];
        for (v, &j) in slots_of.iter().enumerate() {
            x[v * self.slots + j] = 1.0;
        }
        x
    }

    pub fn objective_at(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    pub fn max_violation(&self, x: &[f64]) -> f64 {
        self.rows.iter().map(|r| r.violation(x)).fold(0.0, f64::max)
    }

    /// Sparse text dump: a header, the objective, then one line per row.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "vars {} rows {}", self.n_vars(), self.rows.len()).unwrap();
        let fixed: Vec<String> = self
            .fixed
            .iter()
            .enumerate()
            .filter_map(|(v, f)| f.map(|j| format!("{}", v * self.slots + j)))
            .collect();
        writeln!(out, "fixed {}", fixed.join(" ")).unwrap();
        let obj: Vec<String> = self
            .objective
            .iter()
            .enumerate()
            .filter(|c| *c.1 != 0.0)
            .map(|(j, c)| format!("{j}:{c}"))
            .collect();
        writeln!(out, "min {}", obj.join(" ")).unwrap();
        for r in &self.rows {
            let op = match r.sense {
                Sense::Le => "<=",
                Sense::Ge => ">=",
                Sense::Eq => "=",
            };
            let nz: Vec<String> = r.coeffs.iter().map(|(j, c)| format!("{j}:{c}")).collect();
            writeln!(out, "{op} {} {}", r.rhs, nz.join(" ")).unwrap();
        }
        out
    }
}

/// Cached relations needed to build models for many guesses of one sample.
pub(crate) struct LpInputs<'a> {
    pub problem: Problem,
    pub sample: &'a MultiSample,
    pub sample_rel: &'a SampledRelations,
    pub ensemble: &'a SampleEnsemble,
    pub ensemble_rel: &'a SampledRelations,
    pub slots: usize,
    pub half_width: f64,
}

/// Builds the model; `guess` assigns a slot to every distinct sample vertex
/// (in increasing id order).
#[allow(clippy::too_many_arguments)]
pub fn build_lp<O: PairOracle + ?Sized>(
    oracle: &O,
    problem: Problem,
    sample: &MultiSample,
    guess: &[usize],
    ensemble: &SampleEnsemble,
    slots: usize,
    gamma: f64,
    eps: f64,
    constants: &Constants,
) -> Result<LpModel> {
    let n = oracle.len();
    if gamma <= 0.0 || eps <= 0.0 {
        return Err(Error::InvalidArgument(
            "gamma and eps must be positive".into(),
        ));
    }
    let sample_rel = SampledRelations::read(oracle, vec![sample.items.clone(); n]);
    let ensemble_rel = SampledRelations::read(oracle, ensemble.per_vertex.clone());
    let inputs = LpInputs {
        problem,
        sample,
        sample_rel: &sample_rel,
        ensemble,
        ensemble_rel: &ensemble_rel,
        slots,
        half_width: constants.crux_half_width(eps, gamma, n, sample.len(), ensemble.p),
    };
    let fixed = hardwire(n, sample, guess, slots)?;
    Ok(build_cached(&inputs, fixed))
}

/// Per-vertex hardwired slots from a guess over the distinct sample vertices.
pub(crate) fn hardwire(
    n: usize,
    sample: &MultiSample,
    guess: &[usize],
    slots: usize,
) -> Result<Vec<Option<usize>>> {
    let (verts, _) = sample.distinct();
    if verts.len() != guess.len() {
        return Err(Error::DimensionMismatch {
            expected: verts.len(),
            found: guess.len(),
        });
    }
    let mut fixed = vec![None; n];
    for (&v, &g) in verts.iter().zip(guess) {
        if g >= slots {
            return Err(Error::InvalidArgument(format!(
                "guessed slot {g} out of range"
            )));
        }
        fixed[v] = Some(g);
    }
    Ok(fixed)
}

pub(crate) fn build_cached(inp: &LpInputs<'_>, fixed: Vec<Option<usize>>) -> LpModel {
    let n = inp.sample_rel.lists.len();
    let m = inp.slots;
    let problem = inp.problem;
    let s_scale = n as f64 / (2.0 * inp.sample.len() as f64);
    let p_scale = n as f64 / (2.0 * inp.ensemble.p as f64);
    let slot_of = |w: usize| fixed[w].expect("sample vertex is hardwired");

    // sampled cost of u in slot i against the guessed sample bucketing
    let sample_cost = |u: usize, i: usize| -> f64 {
        let mut bad = 0u64;
        for (&w, &r) in inp.sample_rel.lists[u].iter().zip(&inp.sample_rel.rel[u]) {
            if w != u {
                bad += problem.pair_cost(i, slot_of(w), r) as u64;
            }
        }
        s_scale * bad as f64
    };

    let mut objective = vec![0.0; n * m];
    for u in 0..n {
        for j in 0..m {
            objective[u * m + j] = sample_cost(u, j);
        }
    }

    let mut rows = Vec::with_capacity(n + 2 * m + 2 * n * m);
    for v in 0..n {
        let coeffs = (0..m).map(|j| (v * m + j, 1.0)).collect();
        rows.push(Row::new(coeffs, Sense::Eq, 1.0, RowKind::Simplex { v }, m));
    }
    if problem == Problem::Mfast {
        for j in 0..m {
            let coeffs: Vec<(usize, f64)> = (0..n).map(|v| (v * m + j, 1.0)).collect();
            let (lo, hi) = ((n / m) as f64, n.div_ceil(m) as f64);
            rows.push(Row::new(
                coeffs.clone(),
                Sense::Ge,
                lo,
                RowKind::Balance {
                    slot: j,
                    upper: false,
                },
                m,
            ));
            rows.push(Row::new(
                coeffs,
                Sense::Le,
                hi,
                RowKind::Balance {
                    slot: j,
                    upper: true,
                },
                m,
            ));
        }
    }
    for u in 0..n {
        // multiplicity of each ensemble member of u, with its relation
        let mut members: Vec<(usize, bool, u64)> = Vec::new();
        for (&w, &r) in inp.ensemble_rel.lists[u]
            .iter()
            .zip(&inp.ensemble_rel.rel[u])
        {
            if w == u {
                continue;
            }
            match members.iter_mut().find(|e| e.0 == w) {
                Some(e) => e.2 += 1,
                None => members.push((w, r, 1)),
            }
        }
        members.sort_unstable_by_key(|e| e.0);
        for i in 0..m {
            let c = sample_cost(u, i);
            let mut coeffs = Vec::new();
            for &(w, r, mult) in &members {
                for j in 0..m {
                    if problem.pair_cost(i, j, r) {
                        coeffs.push((w * m + j, p_scale * mult as f64));
                    }
                }
            }
            let b = inp.half_width;
            rows.push(Row::new(
                coeffs.clone(),
                Sense::Ge,
                c - b,
                RowKind::Crux { u, i, upper: false },
                m,
            ));
            rows.push(Row::new(
                coeffs,
                Sense::Le,
                c + b,
                RowKind::Crux { u, i, upper: true },
                m,
            ));
        }
    }
    LpModel {
        n,
        slots: m,
        fixed,
        rows,
        objective,
    }
}

/// Solves the model with every row present.
pub fn solve_lp(model: &LpModel) -> Result<FractionalSolution, LpError> {
    let all: Vec<usize> = (0..model.rows.len()).collect();
    solve_rows(model, &all)
}

/// Solves the model adding crux rows only once they are violated. The
/// result is optimal for the full model: it is optimal for a relaxation and
/// feasible for every row.
pub fn solve_lp_lazy(model: &LpModel) -> Result<FractionalSolution, LpError> {
    let mut active: Vec<usize> = (0..model.rows.len())
        .filter(|&r| !model.rows[r].is_crux())
        .collect();
    loop {
        let sol = solve_rows(model, &active)?;
        let scale = 1e-7 * (1.0 + model.n as f64);
        let violated: Vec<usize> = (0..model.rows.len())
            .filter(|&r| model.rows[r].is_crux() && model.rows[r].violation(&sol.values) > scale)
            .collect();
        if violated.is_empty() {
            return Ok(sol);
        }
        active.extend(violated);
        active.sort_unstable();
    }
}

/// Substitutes hardwired variables, splits the remaining vertices into
/// independent components, and solves each one.
fn solve_rows(model: &LpModel, row_ids: &[usize]) -> Result<FractionalSolution, LpError> {
    let (n, m) = (model.n, model.slots);
    let mut values = vec![0.0; n * m];
    for (v, f) in model.fixed.iter().enumerate() {
        if let Some(j) = f {
            values[v * m + j] = 1.0;
        }
    }
    let free = |v: usize| model.fixed[v].is_none();

    // union-find over free vertices linked by a non-simplex row
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    // (row id, free coefficients, rhs after substitution)
    #[allow(clippy::type_complexity)]
    let mut reduced: Vec<(usize, Vec<(usize, f64)>, f64)> = Vec::new();
    for &r in row_ids {
        let row = &model.rows[r];
        if matches!(row.kind, RowKind::Simplex { .. }) {
            continue;
        }
        let mut rhs = row.rhs;
        let mut coeffs = Vec::new();
        for &(j, c) in &row.coeffs {
            if free(j / m) {
                coeffs.push((j, c));
            } else {
                rhs -= c * values[j];
            }
        }
        if coeffs.is_empty() {
            let tol = TOLERANCE * (1.0 + rhs.abs());
            let ok = match row.sense {
                Sense::Le => 0.0 <= rhs + tol,
                Sense::Ge => 0.0 >= rhs - tol,
                Sense::Eq => rhs.abs() <= tol,
            };
            if !ok {
                return Err(LpError::Infeasible);
            }
            continue;
        }
        let first = find(&mut parent, coeffs[0].0 / m);
        for &(j, _) in &coeffs[1..] {
            let other = find(&mut parent, j / m);
            if other != first {
                parent[other] = first;
            }
        }
        reduced.push((r, coeffs, rhs));
    }

    let mut comp_of_root = vec![usize::MAX; n];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for v in (0..n).filter(|&v| free(v)) {
        let root = find(&mut parent, v);
        if comp_of_root[root] == usize::MAX {
            comp_of_root[root] = comps.len();
            comps.push(Vec::new());
        }
        comps[comp_of_root[root]].push(v);
    }
    let mut comp_rows: Vec<Vec<usize>> = vec![Vec::new(); comps.len()];
    for (idx, (_, coeffs, _)) in reduced.iter().enumerate() {
        let root = find(&mut parent, coeffs[0].0 / m);
        comp_rows[comp_of_root[root]].push(idx);
    }

    for (verts, rows) in comps.iter().zip(&comp_rows) {
        if rows.is_empty() {
            for &v in verts {
                let obj = &model.objective[v * m..(v + 1) * m];
                let mut best = 0;
                for j in 1..m {
                    if obj[j] < obj[best] {
                        best = j;
                    }
                }
                values[v * m + best] = 1.0;
            }
            continue;
        }
        let mut local = vec![usize::MAX; n];
        for (i, &v) in verts.iter().enumerate() {
            local[v] = i;
        }
        let col = |j: usize| local[j / m] * m + j % m;
        let mut lp = DenseLp {
            n_vars: verts.len() * m,
            rows: Vec::with_capacity(verts.len() + rows.len()),
            objective: vec![0.0; verts.len() * m],
        };
        for (i, &v) in verts.iter().enumerate() {
            lp.rows
                .push(((0..m).map(|j| (i * m + j, 1.0)).collect(), Sense::Eq, 1.0));
            lp.objective[i * m..(i + 1) * m].copy_from_slice(&model.objective[v * m..(v + 1) * m]);
        }
        for &idx in rows {
            let (r, coeffs, rhs) = &reduced[idx];
            let coeffs = coeffs.iter().map(|&(j, c)| (col(j), c)).collect();
            lp.rows.push((coeffs, model.rows[*r].sense, *rhs));
        }
        let sol = solve_dense(&lp)?;
        for (i, &v) in verts.iter().enumerate() {
            for j in 0..m {
                values[v * m + j] = sol.x[i * m + j];
            }
        }
    }
    let objective_value = model.objective_at(&values);
    Ok(FractionalSolution {
        values,
        objective_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bucket::{bucket_from_permutation, cost_sample};
    use crate::instances::{gen_planted_tournament, Tournament};

    #[test]
    fn row_counts() {
        let t = Tournament::transitive(4);
        let sample = MultiSample {
            items: vec![1, 1],
            seed: 0,
        };
        let ens = SampleEnsemble::draw(4, 3, 1).unwrap();
        let model = build_lp(
            &t,
            Problem::Mfast,
            &sample,
            &[0],
            &ens,
            2,
            0.2,
            0.5,
            &Constants::desk(),
        )
        .unwrap();
        assert_eq!(model.n_vars(), 8);
        assert_eq!(model.count(|k| matches!(k, RowKind::Simplex { .. })), 4);
        assert_eq!(model.count(|k| matches!(k, RowKind::Balance { .. })), 4);
        assert_eq!(model.count(|k| matches!(k, RowKind::Crux { .. })), 16);
        for r in model.rows.iter().filter(|r| r.is_crux()) {
            assert!(r.l0 <= 3 + 1 + 1);
            assert!(r.linf <= 3.0 * 4.0 / 6.0 + 1e-12);
        }
    }

    #[test]
    fn truth_is_feasible_with_full_samples() {
        let (t, truth) = gen_planted_tournament(10, 0.2, 3).unwrap();
        let sigma = bucket_from_permutation(truth.permutation().unwrap(), 2).unwrap();
        let sample = MultiSample {
            items: (0..10).collect(),
            seed: 0,
        };
        let ens = SampleEnsemble::full(10, 1);
        let model = build_lp(
            &t,
            Problem::Mfast,
            &sample,
            sigma.buckets(),
            &ens,
            2,
            0.2,
            0.5,
            &Constants::desk(),
        )
        .unwrap();
        let x = model.point(sigma.buckets());
        assert!(model.max_violation(&x) < 1e-9);
        let exact_s = cost_sample(&t, Problem::Mfast, sigma.buckets(), &sample);
        assert!((model.objective_at(&x) - exact_s).abs() < 1e-9);
        let sol = solve_lp(&model).unwrap();
        assert!(sol.objective_value <= exact_s + 1e-9);
    }

    #[test]
    fn lazy_matches_full() {
        for seed in 0..6 {
            let (t, _) = gen_planted_tournament(14, 0.3, seed).unwrap();
            let sample = MultiSample {
                items: vec![2, 7, 11],
                seed: 0,
            };
            let ens = SampleEnsemble::draw(14, 5, seed).unwrap();
            let c = Constants::desk()
                .with("crux_bound", 0.6)
                .unwrap()
                .with("crux_noise", 0.2)
                .unwrap();
            let model = build_lp(
                &t,
                Problem::Mfast,
                &sample,
                &[0, 1, 2],
                &ens,
                3,
                0.3,
                0.5,
                &c,
            )
            .unwrap();
            match (solve_lp(&model), solve_lp_lazy(&model)) {
                (Ok(a), Ok(b)) => {
                    assert!((a.objective_value - b.objective_value).abs() < 1e-6);
                    assert!(model.max_violation(&b.values) < 1e-6);
                }
                (Err(a), Err(b)) => assert_eq!(a, b),
                (a, b) => panic!("full {a:?} vs lazy {b:?}"),
            }
        }
    }

    #[test]
    fn dump_lists_every_row() {
        let t = Tournament::transitive(3);
        let sample = MultiSample {
            items: vec![0],
            seed: 0,
        };
        let ens = SampleEnsemble::full(3, 1);
        let model = build_lp(
            &t,
            Problem::Kcc,
            &sample,
            &[0],
            &ens,
            2,
            0.5,
            0.5,
            &Constants::desk(),
        )
        .unwrap();
        let text = model.to_text();
        assert_eq!(text.lines().count(), 3 + model.rows.len());
    }
}
