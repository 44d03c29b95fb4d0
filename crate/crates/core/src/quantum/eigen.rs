//! Lowest eigenspace of `a_z Z - a_x sum_l X_l`.
//!
//! Diagonal problems are solved by inspection, small ones (dimension up to
//! [`DENSE_LIMIT`]) by dense symmetric diagonalization and larger ones by
//! Lanczos with full reorthogonalization and deflation.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{GaugeHamiltonian, QuantumState};
use crate::error::Result;
use crate::graph::GGraph;

pub const DENSE_LIMIT: usize = 1 << 10;
const DEGENERACY_TOL: f64 = 1e-8;
const LANCZOS_KRYLOV: usize = 120;
const LANCZOS_RESTARTS: usize = 40;

#[derive(Debug, Clone)]
pub struct GroundSpace {
    pub energy: f64,
    pub degeneracy: usize,
    /// Orthonormal real basis of the ground space.
    pub vectors: Vec<Vec<f64>>,
}

impl GroundSpace {
    /// Weight of `state` inside the ground space.
    pub fn fidelity(&self, state: &QuantumState) -> f64 {
        self.vectors
            .iter()
            .map(|v| {
                let o: Complex64 = v.iter().zip(state.amplitudes()).map(|(a, b)| b * a).sum();
                o.norm_sqr()
            })
            .sum::<f64>()
            .min(1.0)
    }
}

fn degenerate(e: f64, e0: f64) -> bool {
    (e - e0).abs() <= DEGENERACY_TOL * e0.abs().max(1.0)
}

pub fn exact_ground(g: &GGraph, coupling: f64) -> Result<GroundSpace> {
    let h = GaugeHamiltonian::new(g)?;
    Ok(ground_space(&h, 1.0, coupling))
}

pub fn ground_space(h: &GaugeHamiltonian, a_z: f64, a_x: f64) -> GroundSpace {
    if a_x == 0.0 {
        diagonal_ground(h, a_z)
    } else if h.dim() <= DENSE_LIMIT {
        dense_ground(h, a_z, a_x)
    } else {
        lanczos_ground(h, a_z, a_x)
    }
}

fn diagonal_ground(h: &GaugeHamiltonian, a_z: f64) -> GroundSpace {
    let e: Vec<f64> = h.diagonal().iter().map(|d| a_z * d).collect();
    let e0 = e.iter().copied().fold(f64::INFINITY, f64::min);
    let vectors: Vec<Vec<f64>> = e
        .iter()
        .enumerate()
        .filter(|(_, &x)| degenerate(x, e0))
        .map(|(b, _)| {
            let mut v = vec![0.0; h.dim()];
            v[b] = 1.0;
            v
        })
        .collect();
    GroundSpace {
        energy: e0,
        degeneracy: vectors.len(),
        vectors,
    }
}

fn apply_real(h: &GaugeHamiltonian, a_z: f64, a_x: f64, v: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = v.iter().zip(h.diagonal()).map(|(x, d)| a_z * d * x).collect();
    for l in 0..h.n_links() {
        let bit = 1 << l;
        for (b, o) in out.iter_mut().enumerate() {
            *o -= a_x * v[b ^ bit];
        }
    }
    out
}

pub(crate) fn dense_ground(h: &GaugeHamiltonian, a_z: f64, a_x: f64) -> GroundSpace {
    let dim = h.dim();
    let mut m = DMatrix::<f64>::zeros(dim, dim);
    for b in 0..dim {
        m[(b, b)] = a_z * h.diagonal()[b];
        for l in 0..h.n_links() {
            m[(b ^ (1 << l), b)] -= a_x;
        }
    }
    let eig = m.symmetric_eigen();
    let e0 = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let vectors: Vec<Vec<f64>> = (0..dim)
        .filter(|&k| degenerate(eig.eigenvalues[k], e0))
        .map(|k| eig.eigenvectors.column(k).iter().copied().collect())
        .collect();
    GroundSpace {
        energy: e0,
        degeneracy: vectors.len(),
        vectors,
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn orthogonalize(v: &mut [f64], against: &[Vec<f64>]) {
    // two passes for stability
    for _ in 0..2 {
        for q in against {
            let c = dot(v, q);
            v.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
        }
    }
}

fn normalize(v: &mut [f64]) -> f64 {
    let n = dot(v, v).sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
    n
}

/// Lowest eigenpair in the orthogonal complement of `deflate`.
fn lanczos_lowest(
    apply: &dyn Fn(&[f64]) -> Vec<f64>,
    dim: usize,
    deflate: &[Vec<f64>],
    rng: &mut ChaCha8Rng,
) -> (f64, Vec<f64>) {
    let mut start: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
    orthogonalize(&mut start, deflate);
    normalize(&mut start);
    let mut best = (f64::INFINITY, start.clone());
    for _ in 0..LANCZOS_RESTARTS {
        let mut basis: Vec<Vec<f64>> = vec![start.clone()];
        let mut alpha = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        for j in 0..LANCZOS_KRYLOV.min(dim) {
            let mut w = apply(&basis[j]);
            alpha.push(dot(&w, &basis[j]));
            orthogonalize(&mut w, deflate);
            orthogonalize(&mut w, &basis);
            let b = normalize(&mut w);
            if b < 1e-12 || j + 1 == LANCZOS_KRYLOV.min(dim) {
                break;
            }
            beta.push(b);
            basis.push(w);
        }
        let m = alpha.len();
        let mut t = DMatrix::<f64>::zeros(m, m);
        for i in 0..m {
            t[(i, i)] = alpha[i];
            if i + 1 < m {
                t[(i, i + 1)] = beta[i];
                t[(i + 1, i)] = beta[i];
            }
        }
        let eig = t.symmetric_eigen();
        let (k, &theta) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("non-empty tridiagonal");
        let y: DVector<f64> = eig.eigenvectors.column(k).into();
        let mut x = vec![0.0; dim];
        for (i, q) in basis.iter().take(m).enumerate() {
            x.iter_mut().zip(q).for_each(|(a, b)| *a += y[i] * b);
        }
        orthogonalize(&mut x, deflate);
        normalize(&mut x);
        let hx = apply(&x);
        let residual = hx
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - theta * b).powi(2))
            .sum::<f64>()
            .sqrt();
        best = (theta, x.clone());
        if residual < 1e-10 * theta.abs().max(1.0) {
            break;
        }
        start = x;
    }
    best
}

pub(crate) fn lanczos_ground(h: &GaugeHamiltonian, a_z: f64, a_x: f64) -> GroundSpace {
    let dim = h.dim();
    let apply = |v: &[f64]| apply_real(h, a_z, a_x, v);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let (e0, v0) = lanczos_lowest(&apply, dim, &[], &mut rng);
    let mut vectors = vec![v0];
    while vectors.len() < dim {
        let (e, v) = lanczos_lowest(&apply, dim, &vectors, &mut rng);
        if !degenerate(e, e0) {
            break;
        }
        vectors.push(v);
    }
    GroundSpace {
        energy: e0,
        degeneracy: vectors.len(),
        vectors,
    }
}
