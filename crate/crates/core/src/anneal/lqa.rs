use std::f64::consts::FRAC_PI_2;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::problem::{Csr, Problem};
use super::{AnnealerParams, SampleResult, DIVERGENCE_LIMIT};
use crate::error::{Error, Result};
use crate::graph::GGraph;
use crate::hubo::SpinConfig;

/// Per-link trigonometric quantities of a parameter vector.
struct Angles {
    z: Vec<f64>,
    x: Vec<f64>,
    /// `d theta / d w = (pi/2) sech^2 w`
    dtheta: Vec<f64>,
}

impl Angles {
    fn new(n: usize) -> Self {
        Self {
            z: vec![0.0; n],
            x: vec![0.0; n],
            dtheta: vec![0.0; n],
        }
    }

    fn update(&mut self, w: &[f64]) {
        for (i, &wi) in w.iter().enumerate() {
            let th = wi.tanh();
            let (s, c) = (FRAC_PI_2 * th).sin_cos();
            self.z[i] = s;
            self.x[i] = c;
            self.dtheta[i] = FRAC_PI_2 * (1.0 - th * th);
        }
    }
}

/// For every row of `rows`, calls `f(row, full_product, link, product_without_link)`.
fn for_each_leave_one_out(
    rows: &Csr,
    vals: &[f64],
    buf: &mut Vec<f64>,
    mut f: impl FnMut(usize, f64, usize, f64),
) {
    for r in 0..rows.len() {
        let row = rows.row(r);
        buf.clear();
        let mut acc = 1.0;
        for &l in row {
            buf.push(acc);
            acc *= vals[l];
        }
        let mut suffix = 1.0;
        for (k, &l) in row.iter().enumerate().rev() {
            f(r, acc, l, buf[k] * suffix);
            suffix *= vals[l];
        }
    }
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::Dimension { expected, got })
    }
}

impl Problem {
    /// `t gamma sum_p J_p prod z - (1 - t) sum_l x_l`.
    pub fn lqa_cost(&self, w: &[f64], t: f64, gamma: f64) -> Result<f64> {
        check_len(self.n_links, w.len())?;
        let mut a = Angles::new(self.n_links);
        a.update(w);
        let plaq: f64 = (0..self.plaquettes.len())
            .map(|p| self.coeffs[p] * self.plaquettes.row(p).iter().map(|&l| a.z[l]).product::<f64>())
            .sum();
        Ok(t * gamma * plaq - (1.0 - t) * a.x.iter().sum::<f64>())
    }

    pub fn lqa_grad(&self, w: &[f64], t: f64, gamma: f64) -> Result<Vec<f64>> {
        check_len(self.n_links, w.len())?;
        let mut a = Angles::new(self.n_links);
        a.update(w);
        let mut out = vec![0.0; self.n_links];
        self.grad_into(&a, t, gamma, &mut Vec::new(), &mut out);
        Ok(out)
    }

    fn grad_into(&self, a: &Angles, t: f64, gamma: f64, buf: &mut Vec<f64>, out: &mut [f64]) {
        out.iter_mut().for_each(|g| *g = 0.0);
        for_each_leave_one_out(&self.plaquettes, &a.z, buf, |p, _, l, rest| {
            out[l] += self.coeffs[p] * rest;
        });
        let tg = t * gamma;
        for (i, g) in out.iter_mut().enumerate() {
            *g = a.dtheta[i] * (tg * a.x[i] * *g + (1.0 - t) * a.z[i]);
        }
    }

    /// `sum_v (prod_{l in v} x_l - 1)^2`.
    pub fn gauge_penalty(&self, w: &[f64]) -> Result<f64> {
        check_len(self.n_links, w.len())?;
        let mut a = Angles::new(self.n_links);
        a.update(w);
        Ok((0..self.sites.len())
            .map(|v| {
                let prod: f64 = self.sites.row(v).iter().map(|&l| a.x[l]).product();
                (prod - 1.0).powi(2)
            })
            .sum())
    }

    pub fn gauge_penalty_grad(&self, w: &[f64]) -> Result<Vec<f64>> {
        check_len(self.n_links, w.len())?;
        let mut a = Angles::new(self.n_links);
        a.update(w);
        let mut out = vec![0.0; self.n_links];
        self.gauge_force(&a, &mut Vec::new(), &mut out);
        out.iter_mut().for_each(|g| *g *= 2.0);
        Ok(out)
    }

    /// `sum_{v ni i} (prod_v x - 1) prod_{v \ i} x * dx_i/dw_i`, i.e. half the
    /// penalty gradient.
    fn gauge_force(&self, a: &Angles, buf: &mut Vec<f64>, out: &mut [f64]) {
        out.iter_mut().for_each(|g| *g = 0.0);
        for_each_leave_one_out(&self.sites, &a.x, buf, |_, full, l, rest| {
            out[l] += (full - 1.0) * rest;
        });
        for (i, g) in out.iter_mut().enumerate() {
            *g *= -a.z[i] * a.dtheta[i];
        }
    }

    /// One synchronous gauge-forced update `w <- w - B * force(w)`.
    pub fn gauge_step(&self, w: &[f64], b: f64) -> Result<Vec<f64>> {
        check_len(self.n_links, w.len())?;
        let mut a = Angles::new(self.n_links);
        a.update(w);
        let mut force = vec![0.0; self.n_links];
        self.gauge_force(&a, &mut Vec::new(), &mut force);
        Ok(w.iter().zip(&force).map(|(wi, f)| wi - b * f).collect())
    }

    pub fn lqa_run(&self, params: &AnnealerParams) -> Result<SampleResult> {
        self.run(&AnnealerParams { b: 0.0, ..*params })
    }

    pub fn glqa_run(&self, params: &AnnealerParams) -> Result<SampleResult> {
        self.run(params)
    }

    fn run(&self, params: &AnnealerParams) -> Result<SampleResult> {
        params.validate()?;
        let start = Instant::now();
        let n = self.n_links;
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        let s = params.init_scale;
        let mut w: Vec<f64> = (0..n).map(|_| rng.random_range(-s..=s)).collect();
        let mut nu = vec![0.0; n];
        let mut grad = vec![0.0; n];
        let mut force = vec![0.0; n];
        let mut buf = Vec::new();
        let mut a = Angles::new(n);
        let gauge = params.b > 0.0 && self.sites.len() > 0;

        for j in 1..=params.n_iter {
            let t = j as f64 / params.n_iter as f64;
            a.update(&w);
            self.grad_into(&a, t, params.gamma, &mut buf, &mut grad);
            for i in 0..n {
                nu[i] = params.mu * nu[i] - params.eta * grad[i];
                w[i] += nu[i];
            }
            if gauge {
                a.update(&w);
                self.gauge_force(&a, &mut buf, &mut force);
                w.iter_mut().zip(&force).for_each(|(wi, f)| *wi -= params.b * f);
            }
            if let Some((link, &value)) = w
                .iter()
                .enumerate()
                .find(|(_, v)| !v.is_finite() || v.abs() > DIVERGENCE_LIMIT)
            {
                return Err(Error::Divergence {
                    iteration: j,
                    link,
                    value,
                });
            }
        }
        let spins = SpinConfig::from_signs(&w);
        Ok(SampleResult {
            energy: self.energy(&spins),
            spins,
            iterations_run: params.n_iter,
            wall_time: start.elapsed().as_secs_f64(),
        })
    }
}

pub fn lqa_cost(g: &GGraph, w: &[f64], t: f64, gamma: f64) -> Result<f64> {
    Problem::new(g).lqa_cost(w, t, gamma)
}

pub fn lqa_grad(g: &GGraph, w: &[f64], t: f64, gamma: f64) -> Result<Vec<f64>> {
    Problem::new(g).lqa_grad(w, t, gamma)
}

pub fn gauge_step(g: &GGraph, w: &[f64], b: f64) -> Result<Vec<f64>> {
    Problem::new(g).gauge_step(w, b)
}

pub fn gauge_penalty(g: &GGraph, w: &[f64]) -> Result<f64> {
    Problem::new(g).gauge_penalty(w)
}

pub fn gauge_penalty_grad(g: &GGraph, w: &[f64]) -> Result<Vec<f64>> {
    Problem::new(g).gauge_penalty_grad(w)
}

pub fn lqa_run(g: &GGraph, params: &AnnealerParams) -> Result<SampleResult> {
    Problem::new(g).lqa_run(params)
}

pub fn glqa_run(g: &GGraph, params: &AnnealerParams) -> Result<SampleResult> {
    Problem::new(g).glqa_run(params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_four_regular_dual, gen_torus_lattice, GaugeOperator, Plaquette};
    use approx::assert_relative_eq;

    fn random_w(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Vec<f64> {
        (0..n).map(|_| rng.random_range(-scale..scale)).collect()
    }

    #[test]
    fn cost_at_zero_is_transverse_only() {
        let g = gen_four_regular_dual(8, 3, 6).unwrap();
        for t in [0.0, 0.3, 1.0] {
            let c = lqa_cost(&g, &vec![0.0; 16], t, 0.7).unwrap();
            assert_relative_eq!(c, -(1.0 - t) * 16.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn cost_saturates_to_classical_energy() {
        let g = gen_torus_lattice(2).unwrap();
        let c = lqa_cost(&g, &[100.0; 8], 1.0, 1.0).unwrap();
        assert_relative_eq!(c, -4.0, epsilon = 1e-12);
        let c = lqa_cost(&g, &[100.0; 8], 1.0, 0.25).unwrap();
        assert_relative_eq!(c, 0.25 * g.reference_energy(), epsilon = 1e-12);
    }

    #[test]
    fn grad_vanishes_at_zero() {
        let g = gen_torus_lattice(3).unwrap();
        let gr = lqa_grad(&g, &vec![0.0; 18], 0.4, 0.3).unwrap();
        assert!(gr.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn grad_single_linear_plaquette() {
        let g = GGraph::new(1, vec![Plaquette { coeff: -1.0, links: vec![0] }], vec![]).unwrap();
        let w = 0.3f64;
        let theta = FRAC_PI_2 * w.tanh();
        let sech2 = 1.0 / w.cosh().powi(2);
        let expected = -theta.cos() * FRAC_PI_2 * sech2;
        let got = lqa_grad(&g, &[w], 1.0, 1.0).unwrap()[0];
        assert_relative_eq!(got, expected, max_relative = 1e-14);
    }

    #[test]
    fn grad_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = gen_four_regular_dual(10, 1, 6).unwrap();
        let p = Problem::new(&g);
        for _ in 0..20 {
            let w = random_w(&mut rng, 20, 1.5);
            let t = rng.random_range(0.0..1.0);
            let gr = p.lqa_grad(&w, t, 0.8).unwrap();
            for i in 0..20 {
                let h = 1e-5;
                let mut wp = w.clone();
                wp[i] += h;
                let mut wm = w.clone();
                wm[i] -= h;
                let fd = (p.lqa_cost(&wp, t, 0.8).unwrap() - p.lqa_cost(&wm, t, 0.8).unwrap()) / (2.0 * h);
                assert!((fd - gr[i]).abs() <= 1e-6 * gr[i].abs().max(1e-3), "{fd} vs {}", gr[i]);
            }
        }
    }

    #[test]
    fn angles_stay_on_unit_circle() {
        let mut a = Angles::new(5);
        a.update(&[-40.0, -1.0, 0.0, 0.7, 25.0]);
        for i in 0..5 {
            assert!((a.z[i].powi(2) + a.x[i].powi(2) - 1.0).abs() <= 1e-12);
            assert!(a.x[i] >= 0.0);
        }
    }

    #[test]
    fn gauge_step_fixed_points() {
        let g = gen_torus_lattice(2).unwrap();
        assert_eq!(gauge_step(&g, &[0.0; 8], 0.3).unwrap(), vec![0.0; 8]);
        let w = [0.1, -0.4, 0.9, 1.3, -2.0, 0.0, 0.5, -0.2];
        assert_eq!(gauge_step(&g, &w, 0.0).unwrap(), w.to_vec());
    }

    #[test]
    fn gauge_step_is_half_penalty_gradient() {
        let g = gen_torus_lattice(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let w = random_w(&mut rng, 18, 1.0);
        let b = 0.02;
        let stepped = gauge_step(&g, &w, b).unwrap();
        let grad = gauge_penalty_grad(&g, &w).unwrap();
        for i in 0..18 {
            assert_relative_eq!(stepped[i] - w[i], -0.5 * b * grad[i], max_relative = 1e-10, epsilon = 1e-15);
        }
        assert!(gauge_penalty(&g, &stepped).unwrap() <= gauge_penalty(&g, &w).unwrap());
    }

    #[test]
    fn dimension_errors() {
        let g = gen_torus_lattice(2).unwrap();
        assert!(matches!(lqa_cost(&g, &[0.0; 3], 0.5, 1.0), Err(Error::Dimension { .. })));
        assert!(matches!(lqa_grad(&g, &[0.0; 9], 0.5, 1.0), Err(Error::Dimension { .. })));
        assert!(matches!(gauge_step(&g, &[0.0; 9], 0.5), Err(Error::Dimension { .. })));
    }

    #[test]
    fn zero_iterations_returns_initial_signs() {
        let g = gen_torus_lattice(3).unwrap();
        let params = AnnealerParams { n_iter: 0, seed: 11, ..Default::default() };
        let r = lqa_run(&g, &params).unwrap();
        assert_eq!(r.iterations_run, 0);
        assert_eq!(r.spins.len(), 18);
        assert_eq!(r.energy, g.to_polynomial().evaluate(&r.spins).unwrap());
    }

    #[test]
    fn glqa_without_gauge_strength_is_lqa() {
        let g = gen_torus_lattice(4).unwrap();
        let params = AnnealerParams { n_iter: 200, b: 0.0, seed: 4, ..Default::default() };
        let a = lqa_run(&g, &params).unwrap();
        let b = glqa_run(&g, &params).unwrap();
        assert_eq!(a.spins, b.spins);
        assert_eq!(a.energy, b.energy);
    }

    #[test]
    fn runs_are_deterministic() {
        let g = gen_torus_lattice(4).unwrap();
        let params = AnnealerParams { n_iter: 100, seed: 99, ..Default::default() };
        assert_eq!(glqa_run(&g, &params).unwrap().spins, glqa_run(&g, &params).unwrap().spins);
    }

    #[test]
    fn divergence_is_reported() {
        let g = gen_torus_lattice(2).unwrap();
        let params = AnnealerParams { n_iter: 50, eta: 1e9, mu: 1.0, ..Default::default() };
        assert!(matches!(lqa_run(&g, &params), Err(Error::Divergence { .. })));
    }

    #[test]
    fn small_torus_reaches_ground_state() {
        let g = gen_torus_lattice(2).unwrap();
        let hits = |run: fn(&GGraph, &AnnealerParams) -> Result<SampleResult>| {
            (0..40)
                .filter(|&seed| run(&g, &AnnealerParams { seed, ..Default::default() }).unwrap().energy == -4.0)
                .count()
        };
        assert!(hits(lqa_run) >= 16);
        assert!(hits(glqa_run) >= 16);
    }

    #[test]
    fn site_free_graph_ignores_gauge() {
        let g = GGraph::new(
            2,
            vec![Plaquette { coeff: 1.0, links: vec![0, 1] }],
            Vec::<GaugeOperator>::new(),
        )
        .unwrap();
        let params = AnnealerParams { seed: 2, b: 0.5, ..Default::default() };
        assert_eq!(lqa_run(&g, &params).unwrap().spins, glqa_run(&g, &params).unwrap().spins);
    }
}
