//! Browser bindings: generate a planted instance, solve it, and compare the
//! estimated vertex costs of a k-CC instance with the exact ones.

mod demo;

pub use demo::{CostEstimate, Demo};
use wasm_bindgen::prelude::*;

fn js(e: qptas::Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
pub struct Session(Demo);

#[wasm_bindgen]
impl Session {
    /// Planted k-CC instance.
    pub fn kcc(n: usize, k: usize, noise: f64, seed: u64) -> Result<Session, JsError> {
        Demo::kcc(n, k, noise, seed).map(Session).map_err(js)
    }

    /// Planted tournament.
    pub fn mfast(n: usize, flip: f64, seed: u64) -> Result<Session, JsError> {
        Demo::mfast(n, flip, seed).map(Session).map_err(js)
    }

    pub fn n(&self) -> usize {
        self.0.n()
    }

    pub fn is_kcc(&self) -> bool {
        self.0.is_kcc()
    }

    /// Row-major `n x n` relation matrix: edge for k-CC, `u -> v` for MFAST.
    pub fn matrix(&self) -> Vec<u8> {
        self.0.matrix()
    }

    /// Planted cluster ids or ranks.
    pub fn planted(&self) -> Vec<usize> {
        self.0.planted().to_vec()
    }

    pub fn planted_cost(&self) -> u64 {
        self.0.planted_cost()
    }

    /// Runs the dispatcher and returns the report as JSON.
    pub fn solve(&mut self, eps: f64, seed: u64) -> Result<String, JsError> {
        self.0.solve(eps, seed).map(|r| r.to_json()).map_err(js)
    }

    /// Cluster ids or ranks of the last solve; empty before the first.
    pub fn solution(&self) -> Vec<usize> {
        self.0.solution().unwrap_or_default().to_vec()
    }

    /// Estimator table against exact vertex costs of the planted clustering, as JSON.
    pub fn estimate_costs(&self, eps: f64, seed: u64) -> Result<String, JsError> {
        let est = self.0.estimate_costs(eps, seed).map_err(js)?;
        Ok(serde_json::to_string(&est).expect("estimate serializes"))
    }
}
