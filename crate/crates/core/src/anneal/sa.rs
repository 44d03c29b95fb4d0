use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Problem, SampleResult};
use crate::error::{Error, Result};
use crate::graph::GGraph;
use crate::hubo::SpinConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BetaSchedule {
    #[default]
    Geometric,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SaParams {
    pub sweeps: usize,
    pub beta_min: f64,
    pub beta_max: f64,
    pub schedule: BetaSchedule,
    pub seed: u64,
}

impl Default for SaParams {
    fn default() -> Self {
        Self {
            sweeps: 1000,
            beta_min: 0.1,
            beta_max: 5.0,
            schedule: BetaSchedule::Geometric,
            seed: 0,
        }
    }
}

impl SaParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.to_string()));
        if self.sweeps == 0 {
            return bad("SA needs at least one sweep");
        }
        if !(self.beta_min >= 0.0 && self.beta_min.is_finite() && self.beta_max.is_finite()) {
            return bad("inverse temperatures must be finite and non-negative");
        }
        if self.beta_min > self.beta_max {
            return bad("beta_min exceeds beta_max");
        }
        if self.schedule == BetaSchedule::Geometric && self.beta_min == 0.0 && self.beta_max > 0.0 {
            return bad("geometric schedule needs beta_min > 0");
        }
        Ok(())
    }

    /// Inverse temperature of sweep `k` (0-based).
    pub fn beta(&self, k: usize) -> f64 {
        if self.sweeps == 1 || self.beta_min == self.beta_max {
            return self.beta_max;
        }
        let f = k as f64 / (self.sweeps - 1) as f64;
        match self.schedule {
            BetaSchedule::Linear => self.beta_min + f * (self.beta_max - self.beta_min),
            BetaSchedule::Geometric => self.beta_min * (self.beta_max / self.beta_min).powf(f),
        }
    }
}

impl Problem {
    /// Single-spin-flip Metropolis annealing; returns the best configuration
    /// seen.
    pub fn sa_run(&self, params: &SaParams) -> Result<SampleResult> {
        params.validate()?;
        let start = Instant::now();
        let n = self.n_links;
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        let mut spins: Vec<i8> = (0..n).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect();
        let mut signs: Vec<f64> = (0..self.plaquettes.len())
            .map(|p| {
                let s: i8 = self.plaquettes.row(p).iter().map(|&l| spins[l]).product();
                f64::from(s)
            })
            .collect();
        let mut energy: f64 = self.coeffs.iter().zip(&signs).map(|(c, s)| c * s).sum();
        let mut best = (energy, spins.clone());
        let mut order: Vec<usize> = (0..n).collect();

        for k in 0..params.sweeps {
            let beta = params.beta(k);
            order.shuffle(&mut rng);
            for &i in &order {
                let delta: f64 = -2.0
                    * self
                        .link_plaquettes
                        .row(i)
                        .iter()
                        .map(|&p| self.coeffs[p] * signs[p])
                        .sum::<f64>();
                if delta <= 0.0 || rng.random::<f64>() < (-beta * delta).exp() {
                    spins[i] = -spins[i];
                    for &p in self.link_plaquettes.row(i) {
                        signs[p] = -signs[p];
                    }
                    energy += delta;
                    if energy < best.0 {
                        best = (energy, spins.clone());
                    }
                }
            }
        }
        let spins = SpinConfig::new(best.1)?;
        Ok(SampleResult {
            energy: self.energy(&spins),
            spins,
            iterations_run: params.sweeps,
            wall_time: start.elapsed().as_secs_f64(),
        })
    }
}

pub fn sa_run(g: &GGraph, params: &SaParams) -> Result<SampleResult> {
    Problem::new(g).sa_run(params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::gen_torus_lattice;

    #[test]
    fn cold_sa_solves_small_torus() {
        let g = gen_torus_lattice(2).unwrap();
        let hits = (0..20)
            .filter(|&seed| {
                let p = SaParams { sweeps: 100, beta_min: 1.0, beta_max: 50.0, seed, ..Default::default() };
                sa_run(&g, &p).unwrap().energy == -4.0
            })
            .count();
        assert!(hits >= 19);
    }

    #[test]
    fn infinite_temperature_walk_is_bounded() {
        let g = gen_torus_lattice(3).unwrap();
        for seed in 0..20 {
            let p = SaParams {
                sweeps: 1,
                beta_min: 0.0,
                beta_max: 0.0,
                schedule: BetaSchedule::Linear,
                seed,
            };
            let r = sa_run(&g, &p).unwrap();
            assert!(r.energy >= -9.0);
            assert_eq!(r.energy, g.to_polynomial().evaluate(&r.spins).unwrap());
        }
    }

    #[test]
    fn schedule_validation() {
        let base = SaParams::default();
        assert!(SaParams { sweeps: 0, ..base }.validate().is_err());
        assert!(SaParams { beta_min: 2.0, beta_max: 1.0, ..base }.validate().is_err());
        assert!(SaParams { beta_min: 0.0, ..base }.validate().is_err());
        assert!(SaParams { beta_min: -1.0, schedule: BetaSchedule::Linear, ..base }.validate().is_err());
    }

    #[test]
    fn schedule_endpoints() {
        let p = SaParams { sweeps: 11, beta_min: 0.5, beta_max: 8.0, ..Default::default() };
        assert!((p.beta(0) - 0.5).abs() < 1e-12);
        assert!((p.beta(10) - 8.0).abs() < 1e-12);
        assert!((p.beta(5) - 2.0).abs() < 1e-12);
        let lin = SaParams { schedule: BetaSchedule::Linear, ..p };
        assert!((lin.beta(5) - 4.25).abs() < 1e-12);
    }
}
