//! Local quantum annealing (LQA), its gauge-protected variant (gLQA) and a
//! Metropolis simulated-annealing baseline, all over a [`GGraph`].
//!
//! Each link `l` carries an unbounded parameter `w_l` with angle
//! `theta_l = (pi/2) tanh(w_l)`, longitudinal expectation `z_l = sin theta_l`
//! and transverse expectation `x_l = cos theta_l`.

mod lqa;
mod problem;
mod sa;

pub use lqa::{gauge_penalty, gauge_penalty_grad, gauge_step, glqa_run, lqa_cost, lqa_grad, lqa_run};
pub use problem::Problem;
pub use sa::{sa_run, BetaSchedule, SaParams};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hubo::SpinConfig;

/// Abort threshold on `|w_i|`.
pub const DIVERGENCE_LIMIT: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AnnealerParams {
    pub n_iter: usize,
    /// Weight of the target Hamiltonian.
    pub gamma: f64,
    /// Gradient step.
    pub eta: f64,
    /// Momentum.
    pub mu: f64,
    /// Gauge step strength; zero turns gLQA into LQA.
    #[serde(rename = "B")]
    pub b: f64,
    /// `w` starts uniform in `[-init_scale, init_scale]`.
    pub init_scale: f64,
    pub seed: u64,
}

impl Default for AnnealerParams {
    fn default() -> Self {
        Self {
            n_iter: 500,
            gamma: 20.0,
            eta: 0.1,
            mu: 0.7,
            b: 0.01,
            init_scale: 3.0,
            seed: 0,
        }
    }
}

impl AnnealerParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidParameter(what.to_string()));
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return bad("gamma must be positive");
        }
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return bad("eta must be positive");
        }
        if !(0.0..=1.0).contains(&self.mu) {
            return bad("mu must lie in [0, 1]");
        }
        if !(self.b >= 0.0 && self.b.is_finite()) {
            return bad("B must be non-negative");
        }
        if !(self.init_scale > 0.0 && self.init_scale.is_finite()) {
            return bad("init_scale must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleResult {
    pub energy: f64,
    pub spins: SpinConfig,
    pub iterations_run: usize,
    /// Seconds.
    pub wall_time: f64,
}
