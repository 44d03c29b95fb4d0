//! Trotterized sweep of `H(t) = t gamma Z - (1 - t) sum_l X_l` starting
//! from the uniform superposition, with optional periodic gauge measurements.

use std::fmt::Write as _;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{check_dim, gauge_measure, ground_space, GaugeHamiltonian, QuantumState};
use crate::error::{Error, Result};
use crate::graph::GGraph;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepStep {
    pub t: f64,
    pub energy: f64,
    pub fidelity: f64,
    /// Smallest `<G_v>` over all sites, `None` when there are no sites.
    pub min_gauge: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct SweepReport {
    pub steps: Vec<SweepStep>,
    pub measurements: usize,
    pub minus_outcomes: usize,
}

impl SweepReport {
    pub fn final_fidelity(&self) -> f64 {
        self.steps.last().map_or(0.0, |s| s.fidelity)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,energy,fidelity,min_gauge\n");
        for s in &self.steps {
            let g = s.min_gauge.map(|g| g.to_string()).unwrap_or_default();
            let _ = writeln!(out, "{},{},{},{}", s.t, s.energy, s.fidelity, g);
        }
        out
    }
}

/// One symmetric Trotter step `e^{-iA dt/2} e^{-iB dt} e^{-iA dt/2}` with
/// `A = a_z Z` and `B = -a_x sum X`.
pub fn trotter_step(h: &GaugeHamiltonian, a_z: f64, a_x: f64, dt: f64, state: &mut QuantumState) {
    let psi = state.amplitudes_mut();
    let half = |psi: &mut [Complex64]| {
        for (a, d) in psi.iter_mut().zip(h.diagonal()) {
            *a *= Complex64::from_polar(1.0, -a_z * d * dt / 2.0);
        }
    };
    half(psi);
    let (s, c) = (a_x * dt).sin_cos();
    let is = Complex64::new(0.0, s);
    for l in 0..h.n_links() {
        let bit = 1 << l;
        for b in 0..psi.len() {
            if b & bit == 0 {
                let (u, v) = (psi[b], psi[b | bit]);
                psi[b] = u * c + is * v;
                psi[b | bit] = is * u + v * c;
            }
        }
    }
    half(psi);
}

/// Evolve under a fixed Hamiltonian for total time `time` in `n_steps`
/// Trotter steps.
pub fn trotter_evolve(
    h: &GaugeHamiltonian,
    a_z: f64,
    a_x: f64,
    time: f64,
    n_steps: usize,
    state: &mut QuantumState,
) -> Result<()> {
    check_dim(h, state)?;
    let dt = time / n_steps.max(1) as f64;
    for _ in 0..n_steps {
        trotter_step(h, a_z, a_x, dt, state);
    }
    state.check_norm()
}

/// Sweep `t_j = j / n_steps` for `j = 1..=n_steps`. With `measure_every =
/// Some(m)` every site is measured after each `m`-th step.
pub fn adiabatic_sweep(
    g: &GGraph,
    gamma: f64,
    n_steps: usize,
    dt: f64,
    measure_every: Option<usize>,
    seed: u64,
) -> Result<SweepReport> {
    if n_steps == 0 {
        return Err(Error::InvalidParameter("n_steps must be positive".into()));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
    }
    if measure_every == Some(0) {
        return Err(Error::InvalidParameter("measure_every must be positive".into()));
    }
    let h = GaugeHamiltonian::new(g)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = QuantumState::plus(h.n_links());
    let mut report = SweepReport::default();
    for j in 1..=n_steps {
        let t = j as f64 / n_steps as f64;
        let (a_z, a_x) = (t * gamma, 1.0 - t);
        trotter_step(&h, a_z, a_x, dt, &mut state);
        if measure_every.is_some_and(|m| j % m == 0) {
            for v in 0..h.n_sites() {
                let (outcome, next) = gauge_measure(&h, v, &state, &mut rng)?;
                report.measurements += 1;
                if outcome < 0 {
                    report.minus_outcomes += 1;
                }
                state = next;
            }
        }
        state.check_norm()?;
        let psi = state.amplitudes();
        let min_gauge = (0..h.n_sites())
            .map(|v| h.gauge_expectation(v, psi))
            .min_by(f64::total_cmp);
        report.steps.push(SweepStep {
            t,
            energy: h.expectation(a_z, a_x, psi),
            fidelity: ground_space(&h, a_z, a_x).fidelity(&state),
            min_gauge,
        });
    }
    Ok(report)
}
