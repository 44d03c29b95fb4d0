use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::guard;
use crate::error::{Error, Result};

const NORM_TOL: f64 = 1e-10;

/// Normalized amplitude vector over `2^n_links` basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    n_links: usize,
    amps: Vec<Complex64>,
}

impl QuantumState {
    pub fn basis(n_links: usize, index: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_links];
        amps[index] = Complex64::new(1.0, 0.0);
        Self { n_links, amps }
    }

    /// `|+>^n`, the ground state of `-sum_l X_l`.
    pub fn plus(n_links: usize) -> Self {
        let dim = 1usize << n_links;
        let a = Complex64::new((dim as f64).powf(-0.5), 0.0);
        Self {
            n_links,
            amps: vec![a; dim],
        }
    }

    /// Product state with `<Z_l> = sin theta_l`, `<X_l> = cos theta_l` and
    /// `theta_l = (pi/2) tanh(w_l)`.
    pub fn product_from_w(w: &[f64]) -> Result<Self> {
        guard(w.len())?;
        let per_link: Vec<(f64, f64)> = w
            .iter()
            .map(|&wi| {
                // polar angle from +z is pi/2 - theta
                let phi = FRAC_PI_2 - FRAC_PI_2 * wi.tanh();
                ((phi / 2.0).cos(), (phi / 2.0).sin())
            })
            .collect();
        let amps = (0..1usize << w.len())
            .map(|b| {
                let a: f64 = per_link
                    .iter()
                    .enumerate()
                    .map(|(l, &(up, down))| if b >> l & 1 == 0 { up } else { down })
                    .product();
                Complex64::new(a, 0.0)
            })
            .collect();
        Ok(Self {
            n_links: w.len(),
            amps,
        })
    }

    /// Haar-like random state (normalized complex Gaussian vector).
    pub fn random<R: Rng>(n_links: usize, rng: &mut R) -> Self {
        let amps = (0..1usize << n_links)
            .map(|_| {
                Complex64::new(
                    StandardNormal.sample(&mut *rng),
                    StandardNormal.sample(&mut *rng),
                )
            })
            .collect();
        Self::from_unnormalized(n_links, amps).expect("nonzero gaussian vector")
    }

    pub fn from_unnormalized(n_links: usize, mut amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 1 << n_links {
            return Err(Error::Dimension {
                expected: 1 << n_links,
                got: amps.len(),
            });
        }
        let norm = amps.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::Numerical(format!("state norm {norm}")));
        }
        amps.iter_mut().for_each(|a| *a /= norm);
        Ok(Self { n_links, amps })
    }

    pub fn n_links(&self) -> usize {
        self.n_links
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    pub(crate) fn check_norm(&self) -> Result<()> {
        let n = self.norm_sqr();
        if (n - 1.0).abs() > NORM_TOL || !n.is_finite() {
            return Err(Error::Numerical(format!("state norm^2 drifted to {n}")));
        }
        Ok(())
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &Self) -> f64 {
        self.overlap(other.amplitudes()).norm_sqr()
    }

    pub fn overlap(&self, other: &[Complex64]) -> Complex64 {
        self.amps.iter().zip(other).map(|(a, b)| a.conj() * b).sum()
    }
}
