//! Every tunable constant of the algorithms, overridable by name.
//!
//! Two profiles are provided. [`Constants::desk`] is what the solvers, tests
//! and CLI use by default: sample sizes small enough to run on a laptop and
//! thresholds calibrated on planted instances. [`Constants::asymptotic`] carries
//! the asymptotic exponents (`beta^-9`, `eps^6 / k^18`, ...) and is only useful
//! for printing what the worst-case analysis would ask for.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::Problem;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    /// Multiplier of the estimator sample size `t = c ln(n) beta^-t_exponent`.
    pub c: f64,
    pub c1: f64,
    /// `beta = c2 * eps / k^beta_k_exponent`.
    pub c2: f64,
    /// Costly-vertex threshold `c3 * n / k^2`.
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
    pub beta_k_exponent: f64,
    pub t_exponent: f64,
    pub t_cap: f64,
    /// `delta = delta_coeff * beta^3`.
    pub delta_coeff: f64,
    /// MFAST high-cost threshold `P(eps) = p_coeff * eps^p_eps_exponent`.
    pub p_coeff: f64,
    pub p_eps_exponent: f64,
    /// k-CC high-cost threshold `Q(eps, k) = q_coeff * eps^q_eps_exponent / k^q_k_exponent`.
    pub q_coeff: f64,
    pub q_eps_exponent: f64,
    pub q_k_exponent: f64,
    /// Additive target of the dispatch cost estimate, as a fraction of the threshold.
    pub tau_ratio: f64,
    /// Pair-sample size `ceil(cost_sample_multiplier * ln(n) / tau^2)`.
    pub cost_sample_multiplier: f64,
    /// Enumeration sample `s = s_multiplier * ln(n) / (eps gamma)^2`, capped.
    pub s_multiplier: f64,
    pub s_cap: f64,
    /// Cap on `s` for k-CC, where exhaustive guesses are set partitions and
    /// stay far fewer than `slots^s`.
    pub kcc_s_cap: f64,
    /// Verification ensemble `p = p_multiplier * ln(n) / (eps gamma)^2`, capped.
    pub p_multiplier: f64,
    pub p_cap: f64,
    /// Bucket count `m = m_multiplier / (gamma eps)`, clamped to `[2, min(m_cap, n)]`.
    pub m_multiplier: f64,
    pub m_cap: f64,
    /// Half-width of the sampled-cost rows is the larger of
    /// `crux_bound * eps * gamma * n` and `crux_noise * (n/2) * sqrt(1/s + 1/p)`.
    pub crux_bound: f64,
    pub crux_noise: f64,
    /// Recursion stops and solves exactly at or below this many vertices.
    pub base_n: f64,
    /// Largest `n log2 k` accepted by exhaustive k-CC search.
    pub brute_force_bits: f64,
    /// Largest `d log2 k` for which a sample of `d` distinct vertices is clustered exhaustively.
    pub sample_enum_bits: f64,
    pub local_search_restarts: f64,
    /// Largest `n` accepted by exhaustive MFAST search.
    pub mfast_cap: f64,
    /// Largest number of enumeration guesses a plan may contain.
    pub guess_budget: f64,
}

const NAMES: &[&str] = &[
    "c",
    "c1",
    "c2",
    "c3",
    "c4",
    "c5",
    "beta_k_exponent",
    "t_exponent",
    "t_cap",
    "delta_coeff",
    "p_coeff",
    "p_eps_exponent",
    "q_coeff",
    "q_eps_exponent",
    "q_k_exponent",
    "tau_ratio",
    "cost_sample_multiplier",
    "s_multiplier",
    "s_cap",
    "kcc_s_cap",
    "p_multiplier",
    "p_cap",
    "m_multiplier",
    "m_cap",
    "crux_bound",
    "crux_noise",
    "base_n",
    "brute_force_bits",
    "sample_enum_bits",
    "local_search_restarts",
    "mfast_cap",
    "guess_budget",
];

const CAPS: &[&str] = &[
    "t_cap",
    "s_cap",
    "kcc_s_cap",
    "p_cap",
    "m_cap",
    "base_n",
    "local_search_restarts",
    "mfast_cap",
    "guess_budget",
];

const EXPONENTS: &[&str] = &[
    "beta_k_exponent",
    "t_exponent",
    "p_eps_exponent",
    "q_eps_exponent",
    "q_k_exponent",
];

/// Sample sizes and bucket count of one high-cost run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HighCostSizes {
    pub s: usize,
    pub p: usize,
    pub m: usize,
}

impl Default for Constants {
    fn default() -> Self {
        Self::desk()
    }
}

impl Constants {
    pub fn desk() -> Self {
        Constants {
            c: 1.0,
            c1: 1.0,
            c2: 1.0,
            c3: 0.25,
            c4: 0.25,
            c5: 0.1,
            beta_k_exponent: 3.0,
            t_exponent: 0.5,
            t_cap: 2000.0,
            delta_coeff: 1.0,
            p_coeff: 0.8,
            p_eps_exponent: 2.0,
            q_coeff: 0.6,
            q_eps_exponent: 2.0,
            q_k_exponent: 1.0,
            tau_ratio: 0.5,
            cost_sample_multiplier: 0.5,
            s_multiplier: 1.0,
            s_cap: 3.0,
            kcc_s_cap: 6.0,
            p_multiplier: 1.0,
            p_cap: 20.0,
            m_multiplier: 1.0,
            m_cap: 3.0,
            crux_bound: 3.0,
            crux_noise: 4.0,
            base_n: 8.0,
            brute_force_bits: 24.0,
            sample_enum_bits: 16.0,
            local_search_restarts: 8.0,
            mfast_cap: 10.0,
            guess_budget: 4096.0,
        }
    }

    /// Asymptotic exponents; sample sizes become astronomically large.
    pub fn asymptotic() -> Self {
        Constants {
            t_exponent: 9.0,
            t_cap: f64::MAX,
            q_coeff: 1.0,
            p_coeff: 1.0,
            q_eps_exponent: 6.0,
            q_k_exponent: 18.0,
            s_cap: f64::MAX,
            kcc_s_cap: f64::MAX,
            p_cap: f64::MAX,
            m_cap: f64::MAX,
            guess_budget: f64::MAX,
            ..Self::desk()
        }
    }

    pub fn names() -> &'static [&'static str] {
        NAMES
    }

    fn slot(&mut self, name: &str) -> Option<&mut f64> {
        Some(match name {
            "c" => &mut self.c,
            "c1" => &mut self.c1,
            "c2" => &mut self.c2,
            "c3" => &mut self.c3,
            "c4" => &mut self.c4,
            "c5" => &mut self.c5,
            "beta_k_exponent" => &mut self.beta_k_exponent,
            "t_exponent" => &mut self.t_exponent,
            "t_cap" => &mut self.t_cap,
            "delta_coeff" => &mut self.delta_coeff,
            "p_coeff" => &mut self.p_coeff,
            "p_eps_exponent" => &mut self.p_eps_exponent,
            "q_coeff" => &mut self.q_coeff,
            "q_eps_exponent" => &mut self.q_eps_exponent,
            "q_k_exponent" => &mut self.q_k_exponent,
            "tau_ratio" => &mut self.tau_ratio,
            "cost_sample_multiplier" => &mut self.cost_sample_multiplier,
            "s_multiplier" => &mut self.s_multiplier,
            "s_cap" => &mut self.s_cap,
            "kcc_s_cap" => &mut self.kcc_s_cap,
            "p_multiplier" => &mut self.p_multiplier,
            "p_cap" => &mut self.p_cap,
            "m_multiplier" => &mut self.m_multiplier,
            "m_cap" => &mut self.m_cap,
            "crux_bound" => &mut self.crux_bound,
            "crux_noise" => &mut self.crux_noise,
            "base_n" => &mut self.base_n,
            "brute_force_bits" => &mut self.brute_force_bits,
            "sample_enum_bits" => &mut self.sample_enum_bits,
            "local_search_restarts" => &mut self.local_search_restarts,
            "mfast_cap" => &mut self.mfast_cap,
            "guess_budget" => &mut self.guess_budget,
            _ => return None,
        })
    }

    pub fn get(&self, name: &str) -> Result<f64> {
        self.clone()
            .slot(name)
            .map(|v| *v)
            .ok_or_else(|| Error::UnknownConstant(name.to_string()))
    }

    /// Overrides one constant; unknown names and out-of-range values are rejected.
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        let valid = if EXPONENTS.contains(&name) {
            value >= 0.0 && value.is_finite()
        } else if CAPS.contains(&name) {
            value >= 1.0
        } else {
            value > 0.0 && value.is_finite()
        };
        let slot = self
            .slot(name)
            .ok_or_else(|| Error::UnknownConstant(name.to_string()))?;
        if !valid {
            return Err(Error::InvalidArgument(format!(
                "constant `{name}` cannot be {value}"
            )));
        }
        *slot = value;
        Ok(())
    }

    /// Applies a `name=value` override.
    pub fn apply(&mut self, assignment: &str) -> Result<()> {
        let (name, value) = assignment.split_once('=').ok_or_else(|| {
            Error::InvalidArgument(format!("expected name=value, got `{assignment}`"))
        })?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("`{value}` is not a number")))?;
        self.set(name.trim(), value)
    }

    pub fn with(mut self, name: &str, value: f64) -> Result<Self> {
        self.set(name, value)?;
        Ok(self)
    }

    pub fn beta(&self, eps: f64, k: usize) -> f64 {
        self.c2 * eps / (k as f64).powf(self.beta_k_exponent)
    }

    pub fn delta(&self, beta: f64) -> f64 {
        self.delta_coeff * beta.powi(3)
    }

    /// Estimator sample size `min(c ln(n) beta^-t_exponent, t_cap, 10 n)`, at least 1.
    pub fn estimator_sample_size(&self, n: usize, beta: f64) -> usize {
        let raw = self.c * (n as f64).ln() * beta.powf(-self.t_exponent);
        let t = raw.min(self.t_cap).min(10.0 * n as f64).ceil();
        (t as usize).max(1)
    }

    pub fn p_threshold(&self, eps: f64) -> f64 {
        self.p_coeff * eps.powf(self.p_eps_exponent)
    }

    pub fn q_threshold(&self, eps: f64, k: usize) -> f64 {
        self.q_coeff * eps.powf(self.q_eps_exponent) / (k as f64).powf(self.q_k_exponent)
    }

    pub fn cost_sample_size(&self, n: usize, tau: f64) -> f64 {
        (self.cost_sample_multiplier * (n as f64).ln().max(1.0) / (tau * tau)).ceil()
    }

    pub fn high_cost_sizes(
        &self,
        problem: Problem,
        n: usize,
        eps: f64,
        gamma: f64,
    ) -> HighCostSizes {
        let ln = (n as f64).ln().max(1.0);
        let eg = eps * gamma;
        let size = |mult: f64, cap: f64| (mult * ln / (eg * eg)).ceil().min(cap).max(1.0) as usize;
        let m_raw = (self.m_multiplier / eg).round().max(2.0);
        let m = m_raw.min(self.m_cap).min(n as f64).max(1.0) as usize;
        HighCostSizes {
            s: size(
                self.s_multiplier,
                match problem {
                    Problem::Mfast => self.s_cap,
                    Problem::Kcc => self.kcc_s_cap,
                },
            ),
            p: size(self.p_multiplier, self.p_cap),
            m,
        }
    }

    /// `s` and `p` are the realized sample and ensemble sizes.
    pub fn crux_half_width(&self, eps: f64, gamma: f64, n: usize, s: usize, p: usize) -> f64 {
        let n = n as f64;
        let noise = 0.5 * n * (1.0 / s as f64 + 1.0 / p as f64).sqrt();
        (self.crux_bound * eps * gamma * n).max(self.crux_noise * noise)
    }

    pub(crate) fn base_n(&self) -> usize {
        self.base_n as usize
    }

    pub(crate) fn mfast_cap(&self) -> usize {
        self.mfast_cap as usize
    }

    pub(crate) fn restarts(&self) -> usize {
        self.local_search_restarts as usize
    }
}
