use qptas::estimator::estimate_vertex_costs;
use qptas::high_cost::ExactLowMfast;
use qptas::instances::{gen_planted_clustering, gen_planted_tournament, Planted};
use qptas::oracles::{kcc_cost, mfast_cost, VertexCostView};
use qptas::{
    dispatch_kcc, dispatch_mfast, Constants, Error, LabeledGraph, PairOracle, Result, SolveReport,
    Tournament,
};
use serde::Serialize;

enum Instance {
    Kcc(LabeledGraph, usize),
    Mfast(Tournament),
}

pub struct Demo {
    instance: Instance,
    planted: Vec<usize>,
    planted_cost: u64,
    solution: Option<Vec<usize>>,
    constants: Constants,
}

#[derive(Debug, Clone, Serialize)]
pub struct CostEstimate {
    pub sample_size: usize,
    pub queries_dedup: u64,
    /// Estimated cost of every vertex in its planted cluster.
    pub estimated: Vec<f64>,
    pub exact: Vec<u64>,
    /// Largest `|estimate - exact|` over all vertices and clusters.
    pub max_deviation: f64,
}

impl Demo {
    pub fn kcc(n: usize, k: usize, noise: f64, seed: u64) -> Result<Demo> {
        let (g, truth) = gen_planted_clustering(n, k, noise, seed)?;
        let c = truth.clustering().expect("planted clustering");
        Ok(Demo {
            planted: c.assignment().to_vec(),
            planted_cost: truth.flipped_pairs as u64,
            instance: Instance::Kcc(g, k),
            solution: None,
            constants: Constants::desk(),
        })
    }

    pub fn mfast(n: usize, flip: f64, seed: u64) -> Result<Demo> {
        let (t, truth) = gen_planted_tournament(n, flip, seed)?;
        let ranks = match &truth.planted {
            Planted::Permutation(p) => p.ranks().to_vec(),
            Planted::Clustering(_) => unreachable!("tournaments plant a permutation"),
        };
        Ok(Demo {
            planted: ranks,
            planted_cost: truth.flipped_pairs as u64,
            instance: Instance::Mfast(t),
            solution: None,
            constants: Constants::desk(),
        })
    }

    pub fn n(&self) -> usize {
        match &self.instance {
            Instance::Kcc(g, _) => g.n(),
            Instance::Mfast(t) => t.n(),
        }
    }

    pub fn is_kcc(&self) -> bool {
        matches!(self.instance, Instance::Kcc(..))
    }

    pub fn matrix(&self) -> Vec<u8> {
        let n = self.n();
        let mut m = vec![0u8; n * n];
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    m[u * n + v] = match &self.instance {
                        Instance::Kcc(g, _) => g.peek_edge(u, v),
                        Instance::Mfast(t) => t.peek_arc(u, v),
                    } as u8;
                }
            }
        }
        m
    }

    pub fn planted(&self) -> &[usize] {
        &self.planted
    }

    pub fn planted_cost(&self) -> u64 {
        self.planted_cost
    }

    pub fn solution(&self) -> Option<&[usize]> {
        self.solution.as_deref()
    }

    /// Solves on a fresh oracle so the counters cover this run only.
    pub fn solve(&mut self, eps: f64, seed: u64) -> Result<SolveReport> {
        let c = &self.constants;
        let (solution, report) = match &self.instance {
            Instance::Kcc(g, k) => {
                let g = g.fresh();
                let (cl, mut report) = dispatch_kcc(&g, *k, eps, c, seed)?;
                report.cost_exact = Some(kcc_cost(&g, &cl)?);
                (Some(cl.assignment().to_vec()), report)
            }
            Instance::Mfast(t) => {
                let t = t.fresh();
                let (pi, mut report) = dispatch_mfast(&t, eps, c, &ExactLowMfast, seed)?;
                if let Some(pi) = &pi {
                    report.cost_exact = Some(mfast_cost(&t, pi)?);
                }
                (pi.map(|p| p.ranks().to_vec()), report)
            }
        };
        self.solution = solution;
        Ok(report)
    }

    pub fn estimate_costs(&self, eps: f64, seed: u64) -> Result<CostEstimate> {
        let Instance::Kcc(g, k) = &self.instance else {
            return Err(Error::InvalidArgument(
                "cost estimates exist for k-CC only".into(),
            ));
        };
        let g = g.fresh();
        let c = &self.constants;
        let table = estimate_vertex_costs(&g, *k, c.beta(eps, *k), c, seed)?;
        let queries_dedup = g.queries().dedup;
        let truth = qptas::Clustering::new(*k, self.planted.clone())?;
        let view = VertexCostView::new(&g, &truth)?;
        // match estimator slots to planted clusters by their sample members
        let al = qptas::align_clusterings(
            &table.sample_clustering.as_clustering(),
            &qptas::Clustering::new(
                *k,
                table
                    .sample_clustering
                    .vertices
                    .iter()
                    .map(|&v| truth.cluster_of(v))
                    .collect(),
            )?,
        )?;
        let n = g.n();
        let mut slot_of = vec![0; *k];
        for (slot, &cluster) in al.mapping.iter().enumerate() {
            slot_of[cluster] = slot;
        }
        let mut max_deviation: f64 = 0.0;
        for v in 0..n {
            for (j, &slot) in slot_of.iter().enumerate() {
                let d = (table.get(v, slot) - view.cost(v, j) as f64).abs();
                max_deviation = max_deviation.max(d);
            }
        }
        Ok(CostEstimate {
            sample_size: table.sample.len(),
            queries_dedup,
            estimated: (0..n)
                .map(|v| table.get(v, slot_of[truth.cluster_of(v)]))
                .collect(),
            exact: (0..n).map(|v| view.own_cost(v)).collect(),
            max_deviation,
        })
    }
}
