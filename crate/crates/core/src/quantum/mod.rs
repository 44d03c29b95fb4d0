//! Exact state-vector simulation of the Z2 gauge Hamiltonian
//! `H = sum_p J_p prod_{l in p} Z_l - g sum_l X_l` on at most
//! [`MAX_LINKS`] links.
//!
//! Basis index bit `l` set means link `l` has `sigma_z = -1`.

mod eigen;
mod state;
mod sweep;

pub use eigen::{exact_ground, ground_space, GroundSpace};
pub use state::QuantumState;
pub use sweep::{adiabatic_sweep, trotter_evolve, trotter_step, SweepReport, SweepStep};

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::GGraph;

pub const MAX_LINKS: usize = 16;

fn guard(n_links: usize) -> Result<()> {
    if n_links > MAX_LINKS {
        Err(Error::Size {
            what: "n_links",
            got: n_links,
            limit: MAX_LINKS,
        })
    } else {
        Ok(())
    }
}

/// Diagonal plaquette part and gauge masks of a G-graph, ready for dense
/// simulation.
#[derive(Debug, Clone)]
pub struct GaugeHamiltonian {
    n: usize,
    diag: Vec<f64>,
    site_masks: Vec<usize>,
}

impl GaugeHamiltonian {
    pub fn new(g: &GGraph) -> Result<Self> {
        guard(g.n_links())?;
        let n = g.n_links();
        let masks: Vec<(f64, usize)> = g
            .plaquettes()
            .iter()
            .map(|p| (p.coeff, p.links.iter().fold(0, |m, &l| m | 1 << l)))
            .collect();
        let diag = (0..1usize << n)
            .map(|b| {
                masks
                    .iter()
                    .map(|&(c, m)| if (b & m).count_ones() % 2 == 0 { c } else { -c })
                    .sum()
            })
            .collect();
        let site_masks = g
            .sites()
            .iter()
            .map(|s| s.links.iter().fold(0, |m, &l| m | 1 << l))
            .collect();
        Ok(Self { n, diag, site_masks })
    }

    pub fn n_links(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn n_sites(&self) -> usize {
        self.site_masks.len()
    }

    /// Eigenvalues of the plaquette part, indexed by basis state.
    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    /// `(a_z Z - a_x sum_l X_l) psi`.
    pub fn apply(&self, a_z: f64, a_x: f64, psi: &[Complex64]) -> Vec<Complex64> {
        let mut out: Vec<Complex64> = psi.iter().zip(&self.diag).map(|(a, d)| a * (a_z * d)).collect();
        if a_x != 0.0 {
            for l in 0..self.n {
                let bit = 1 << l;
                for (b, o) in out.iter_mut().enumerate() {
                    *o -= psi[b ^ bit] * a_x;
                }
            }
        }
        out
    }

    pub fn expectation(&self, a_z: f64, a_x: f64, psi: &[Complex64]) -> f64 {
        let h = self.apply(a_z, a_x, psi);
        psi.iter().zip(&h).map(|(a, b)| (a.conj() * b).re).sum()
    }

    /// `G_v psi`.
    pub fn apply_gauge(&self, site: usize, psi: &[Complex64]) -> Vec<Complex64> {
        let m = self.site_masks[site];
        (0..psi.len()).map(|b| psi[b ^ m]).collect()
    }

    pub fn gauge_expectation(&self, site: usize, psi: &[Complex64]) -> f64 {
        let m = self.site_masks[site];
        psi.iter()
            .enumerate()
            .map(|(b, a)| (a.conj() * psi[b ^ m]).re)
            .sum()
    }
}

/// `(Z - coupling * sum_l X_l) |state>`.
pub fn apply_hamiltonian(g: &GGraph, coupling: f64, state: &QuantumState) -> Result<Vec<Complex64>> {
    let h = GaugeHamiltonian::new(g)?;
    check_dim(&h, state)?;
    Ok(h.apply(1.0, coupling, state.amplitudes()))
}

pub fn expectation(g: &GGraph, coupling: f64, state: &QuantumState) -> Result<f64> {
    let h = GaugeHamiltonian::new(g)?;
    check_dim(&h, state)?;
    Ok(h.expectation(1.0, coupling, state.amplitudes()))
}

fn check_dim(h: &GaugeHamiltonian, state: &QuantumState) -> Result<()> {
    if state.n_links() != h.n_links() {
        return Err(Error::Dimension {
            expected: h.n_links(),
            got: state.n_links(),
        });
    }
    Ok(())
}

/// Projective measurement of `G_v`. On outcome `-1` the state is projected
/// onto the `-1` sector and kept; callers record the event.
pub fn gauge_measure<R: Rng>(
    h: &GaugeHamiltonian,
    site: usize,
    state: &QuantumState,
    rng: &mut R,
) -> Result<(i8, QuantumState)> {
    let psi = state.amplitudes();
    let p_plus = 0.5 * (1.0 + h.gauge_expectation(site, psi));
    if !(-1e-10..=1.0 + 1e-10).contains(&p_plus) {
        return Err(Error::Numerical(format!("P(+1) = {p_plus} for site {site}")));
    }
    let outcome: i8 = if rng.random::<f64>() < p_plus { 1 } else { -1 };
    let sign = f64::from(outcome);
    let g_psi = h.apply_gauge(site, psi);
    let projected: Vec<Complex64> = psi.iter().zip(&g_psi).map(|(a, b)| (a + b * sign) * 0.5).collect();
    Ok((outcome, QuantumState::from_unnormalized(h.n_links(), projected)?))
}
