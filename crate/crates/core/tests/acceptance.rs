//! End-to-end acceptance checks. Prints one line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::time::Instant;

use gauge_hubo::anneal::{gauge_penalty, gauge_step, lqa_cost, lqa_grad, AnnealerParams, Problem, SaParams};
use gauge_hubo::bench::{
    run_on_graph, scaling_sweep_with, tts, ExperimentConfig, ExperimentReport, Family, InstanceSpec, Solver,
};
use gauge_hubo::graph::{
    build_dual, gen_four_regular_dual, gen_torus_lattice, CycleRule, GGraph, HuboGraph, Plaquette,
};
use gauge_hubo::hubo::{brute_force_minimum, parse_instance_ordered};
use gauge_hubo::quantum::{adiabatic_sweep, GaugeHamiltonian, QuantumState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Fixed from offline scans; `eta` and `init_scale` are tuned per experiment.
const BASE: AnnealerParams = AnnealerParams {
    n_iter: 500,
    gamma: 20.0,
    eta: 0.1,
    mu: 0.7,
    b: 0.0,
    init_scale: 3.0,
    seed: 0,
};

const ETA_GRID: [f64; 3] = [0.01, 0.03, 0.1];
const INIT_GRID: [f64; 2] = [2.0, 3.0];
/// gLQA always runs with a gauge step; B = 0 would make it plain LQA.
const B_GRID: [f64; 5] = [0.003, 0.01, 0.03, 0.1, 0.3];
const TUNE_SAMPLES: usize = 50;
const TUNE_SEED: u64 = 1_000;
const EVAL_SEED: u64 = 2_000;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn experiment(
    instance: InstanceSpec,
    solver: Solver,
    annealer: AnnealerParams,
    n_sam: usize,
    n_iter: &[usize],
    seed: u64,
) -> ExperimentConfig {
    ExperimentConfig {
        instance,
        solver,
        annealer,
        sa: SaParams::default(),
        n_sam,
        n_iter: n_iter.to_vec(),
        reference_energy: None,
        master_seed: seed,
        workers: None,
    }
}

fn torus(size: usize) -> InstanceSpec {
    InstanceSpec { family: Family::Torus, size, seed: 0, k_m: 6 }
}

fn best_tts(r: &ExperimentReport) -> f64 {
    r.best_tts().and_then(|g| g.tts).unwrap_or(f64::INFINITY)
}

/// Grid search over `eta`, `init_scale` and (gLQA only) `B` on tuning seeds,
/// which are disjoint from evaluation seeds. Scores by the smallest TTS over
/// `grid`, then by the largest success probability.
fn tune(g: &GGraph, instance: InstanceSpec, solver: Solver, grid: &[usize]) -> AnnealerParams {
    let bs: &[f64] = if solver == Solver::Lqa { &[0.0] } else { &B_GRID };
    let mut best: Option<((f64, f64), AnnealerParams)> = None;
    for &eta in &ETA_GRID {
        for &init_scale in &INIT_GRID {
            for &b in bs {
                let params = AnnealerParams { eta, init_scale, b, ..BASE };
                let cfg = experiment(instance, solver, params, TUNE_SAMPLES, grid, TUNE_SEED);
                let r = run_on_graph(&cfg, g).unwrap();
                let p_max = r.points.iter().map(|p| p.p).fold(0.0, f64::max);
                let key = (best_tts(&r), -p_max);
                if best.as_ref().is_none_or(|(k, _)| key < *k) {
                    best = Some((key, params));
                }
            }
        }
    }
    let ((t, p), params) = best.expect("non-empty grid");
    println!(
        "    tuned {}: eta={} init_scale={} B={} (tuning TTS {t:.4}s, max p {:.2})",
        solver.name(),
        params.eta,
        params.init_scale,
        params.b,
        -p
    );
    params
}

fn show(r: &ExperimentReport) {
    for g in &r.points {
        println!(
            "    {:>4} n_iter={:<5} E_min={:?} E_med={:?} p={:.3} t_p={:.2}ms TTS={}",
            r.solver.name(),
            g.n_iter,
            g.e_min,
            g.e_med,
            g.p,
            g.t_p_mean * 1e3,
            g.tts.map_or("inf".into(), |t| format!("{t:.4}s"))
        );
    }
}

// ---------------------------------------------------------------- 1

fn criterion_1() -> Outcome {
    let text = "vars 8\n-1 1 3 5 4\n-1 2 4 6 3\n-1 1 8 5 7\n-1 2 7 6 8\n";
    let inst = parse_instance_ordered(text).unwrap();
    let g = build_dual(&HuboGraph::build_ordered(&inst).unwrap(), 6, CycleRule::Faces).unwrap();
    let got: BTreeSet<BTreeSet<usize>> =
        g.sites().iter().map(|s| s.links.iter().map(|l| l + 1).collect()).collect();
    let want: BTreeSet<BTreeSet<usize>> = [[4, 6, 8, 5], [1, 8, 2, 4], [3, 5, 7, 6], [1, 2, 3, 7]]
        .iter()
        .map(|s| s.iter().copied().collect())
        .collect();
    outcome(got == want, format!("sites {got:?}"))
}

// ---------------------------------------------------------------- 2

fn random_couplings(g: &GGraph, rng: &mut ChaCha8Rng) -> GGraph {
    let plaquettes = g
        .plaquettes()
        .iter()
        .map(|p| {
            let mag: f64 = rng.random_range(0.5..1.5);
            let coeff = if rng.random_bool(0.5) { mag } else { -mag };
            Plaquette { coeff, links: p.links.clone() }
        })
        .collect();
    GGraph::new(g.n_links(), plaquettes, g.sites().to_vec()).unwrap()
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut instances = Vec::new();
    for k in 0..120u64 {
        let base = if k % 5 == 0 {
            gen_torus_lattice(2).unwrap()
        } else {
            gen_four_regular_dual(5 + (k as usize % 4), k, 6).unwrap()
        };
        instances.push(random_couplings(&base, &mut rng));
    }
    let budget = AnnealerParams { b: 0.01, ..BASE };
    let restarts = 20;
    let mut below = 0;
    let mut hits = 0;
    for (k, g) in instances.iter().enumerate() {
        let (e_min, _) = brute_force_minimum(&g.to_polynomial()).unwrap();
        let p = Problem::new(g);
        let mut best = f64::INFINITY;
        for r in 0..restarts {
            let seed = (k * restarts + r) as u64;
            let params = AnnealerParams { seed, ..budget };
            for e in [
                p.lqa_run(&params).map(|s| s.energy),
                p.glqa_run(&params).map(|s| s.energy),
                p.sa_run(&SaParams { seed, sweeps: 200, ..Default::default() }).map(|s| s.energy),
            ]
            .into_iter()
            .flatten()
            {
                if e < e_min - 1e-9 {
                    below += 1;
                }
            }
            if let Ok(s) = p.glqa_run(&params) {
                best = best.min(s.energy);
            }
        }
        if (best - e_min).abs() <= 1e-9 {
            hits += 1;
        }
    }
    let frac = hits as f64 / instances.len() as f64;
    outcome(
        below == 0 && frac >= 0.9,
        format!(
            "{} instances, {below} energies below brute force, gLQA (best of {restarts}) hit rate {frac:.3}",
            instances.len()
        ),
    )
}

// ---------------------------------------------------------------- 3

fn small_instances() -> Vec<GGraph> {
    vec![
        gen_torus_lattice(2).unwrap(),
        gen_torus_lattice(3).unwrap(),
        gen_four_regular_dual(7, 1, 6).unwrap(),
        gen_four_regular_dual(12, 2, 6).unwrap(),
    ]
}

fn rel_err(a: &[f64], b: &[f64]) -> f64 {
    let diff: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let scale: f64 = b.iter().map(|y| y * y).sum::<f64>().sqrt();
    diff / scale.max(1e-12)
}

fn criterion_3() -> Outcome {
    let graphs = small_instances();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    for k in 0..1000 {
        let g = &graphs[k % graphs.len()];
        let (gr, n) = (random_couplings(g, &mut rng), g.n_links());
        let w: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
        let t: f64 = rng.random_range(0.0..1.0);
        let gamma: f64 = rng.random_range(0.1..10.0);
        let grad = lqa_grad(&gr, &w, t, gamma).unwrap();
        let fd: Vec<f64> = (0..n)
            .map(|i| {
                let mut wp = w.clone();
                let mut wm = w.clone();
                wp[i] += h;
                wm[i] -= h;
                (lqa_cost(&gr, &wp, t, gamma).unwrap()
                    - lqa_cost(&gr, &wm, t, gamma).unwrap())
                    / (2.0 * h)
            })
            .collect();
        worst = worst.max(rel_err(&grad, &fd));
    }
    outcome(worst <= 1e-6, format!("1000 cases, worst relative error {worst:.2e}"))
}

// ---------------------------------------------------------------- 4

/// Gradient of `sum_v (prod x - 1)^2`, written out site by site.
fn penalty_gradient_oracle(g: &GGraph, w: &[f64]) -> Vec<f64> {
    let half_pi = std::f64::consts::FRAC_PI_2;
    let x: Vec<f64> = w.iter().map(|wi| (half_pi * wi.tanh()).cos()).collect();
    let dx: Vec<f64> = w
        .iter()
        .map(|wi| -(half_pi * wi.tanh()).sin() * half_pi / wi.cosh().powi(2))
        .collect();
    let mut grad = vec![0.0; w.len()];
    for site in g.sites() {
        let prod: f64 = site.links.iter().map(|&l| x[l]).product();
        for &i in &site.links {
            let others: f64 = site.links.iter().filter(|&&l| l != i).map(|&l| x[l]).product();
            grad[i] += 2.0 * (prod - 1.0) * others * dx[i];
        }
    }
    grad
}

fn criterion_4() -> Outcome {
    let graphs = small_instances();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for k in 0..100 {
        let g = &graphs[k % graphs.len()];
        let w: Vec<f64> = (0..g.n_links()).map(|_| rng.random_range(-1.5..1.5)).collect();
        let b: f64 = rng.random_range(0.001..1.0);
        let stepped = gauge_step(g, &w, b).unwrap();
        let disp: Vec<f64> = stepped.iter().zip(&w).map(|(s, w)| s - w).collect();
        let want: Vec<f64> = penalty_gradient_oracle(g, &w).iter().map(|d| -0.5 * b * d).collect();
        worst = worst.max(rel_err(&disp, &want));
    }
    let mut increases = 0;
    for k in 0..100 {
        let g = &graphs[k % graphs.len()];
        let w: Vec<f64> = (0..g.n_links()).map(|_| rng.random_range(-1.5..1.5)).collect();
        let b: f64 = rng.random_range(1e-4..=0.01);
        let before = gauge_penalty(g, &w).unwrap();
        let after = gauge_penalty(g, &gauge_step(g, &w, b).unwrap()).unwrap();
        if after > before + 1e-15 {
            increases += 1;
        }
    }
    outcome(
        worst <= 1e-8 && increases == 0,
        format!("worst displacement error {worst:.2e}, penalty increases {increases}/100"),
    )
}

// ---------------------------------------------------------------- 5, 8

struct Fig3 {
    glqa_best_tp: f64,
}

fn criterion_5() -> (Outcome, Fig3) {
    let g = gen_torus_lattice(10).unwrap();
    let grid = [100, 200, 500, 1000, 2000];
    let run = |solver| {
        let params = tune(&g, torus(10), solver, &grid);
        run_on_graph(&experiment(torus(10), solver, params, 200, &grid, EVAL_SEED), &g).unwrap()
    };
    let lqa = run(Solver::Lqa);
    let glqa = run(Solver::Glqa);
    show(&lqa);
    show(&glqa);
    let e_min = |r: &ExperimentReport| r.points.iter().filter_map(|p| p.e_min).fold(f64::INFINITY, f64::min);
    let a = e_min(&lqa) == -100.0 && e_min(&glqa) == -100.0;
    let ratio = best_tts(&glqa) / best_tts(&lqa);
    let b = ratio <= 0.5;
    // saturated probability: the plateau value, taken as the best over the grid
    let p_sat = |r: &ExperimentReport| r.points.iter().map(|p| p.p).fold(0.0, f64::max);
    let c = p_sat(&glqa) >= 2.0 * p_sat(&lqa);
    let glqa_best_tp = glqa.best_tts().map_or(glqa.points[2].t_p_mean, |g| g.t_p_mean);
    (
        outcome(
            a && b && c,
            format!(
                "(a) E_min lqa {} glqa {} [{a}]; (b) TTS ratio {ratio:.3} [{b}]; (c) max p lqa {:.3} glqa {:.3} [{c}]",
                e_min(&lqa),
                e_min(&glqa),
                p_sat(&lqa),
                p_sat(&glqa),
            ),
        ),
        Fig3 { glqa_best_tp },
    )
}

fn criterion_8(fig3: &Fig3) -> Outcome {
    let g = gen_torus_lattice(10).unwrap();
    let p = Problem::new(&g);
    let calib_sweeps = 200;
    let start = Instant::now();
    for seed in 0..20 {
        p.sa_run(&SaParams { sweeps: calib_sweeps, seed, ..Default::default() }).unwrap();
    }
    let per_sweep = start.elapsed().as_secs_f64() / (20 * calib_sweeps) as f64;
    let sweeps = ((fig3.glqa_best_tp / per_sweep).round() as usize).max(1);
    let cfg = experiment(torus(10), Solver::Sa, BASE, 200, &[sweeps], EVAL_SEED);
    let r = run_on_graph(&cfg, &g).unwrap();
    show(&r);
    let e_min = r.points[0].e_min.unwrap_or(f64::INFINITY);
    outcome(
        e_min > -100.0,
        format!(
            "budget {:.2}ms -> {sweeps} sweeps, SA E_min {e_min}, p {:.3}",
            fig3.glqa_best_tp * 1e3,
            r.points[0].p
        ),
    )
}

// ---------------------------------------------------------------- 6

fn criterion_6() -> Outcome {
    let n_iter = 1000;
    let g10 = gen_torus_lattice(10).unwrap();
    let lqa = tune(&g10, torus(10), Solver::Lqa, &[n_iter]);
    let glqa = tune(&g10, torus(10), Solver::Glqa, &[n_iter]);
    let rows = scaling_sweep_with(
        Family::Torus,
        &[10, 20, 30, 40],
        &experiment(torus(10), Solver::Lqa, lqa, 200, &[n_iter], EVAL_SEED),
        &experiment(torus(10), Solver::Glqa, glqa, 200, &[n_iter], EVAL_SEED),
        n_iter,
    )
    .unwrap();
    let mut ok = true;
    let mut detail = Vec::new();
    for r in &rows {
        ok &= r.r_p >= 2.0 && r.r_tts <= 0.4;
        detail.push(format!(
            "L={} p {:.3}/{:.3} r_p {:.2} r_TTS {:.2}",
            r.size, r.lqa.p, r.glqa.p, r.r_p, r.r_tts
        ));
    }
    outcome(ok, detail.join("; "))
}

// ---------------------------------------------------------------- 7

fn criterion_7() -> Outcome {
    let instance = InstanceSpec { family: Family::FourRegularDual, size: 200, seed: 1, k_m: 6 };
    let g = instance.build().unwrap();
    println!("    four-regular dual: {} links, {} sites", g.n_links(), g.n_sites());
    let grid = [100, 200, 500, 800, 1000];
    let run = |solver| {
        let params = tune(&g, instance, solver, &grid);
        run_on_graph(&experiment(instance, solver, params, 500, &grid, EVAL_SEED), &g).unwrap()
    };
    let lqa = run(Solver::Lqa);
    let glqa = run(Solver::Glqa);
    show(&lqa);
    show(&glqa);
    let p_at = |r: &ExperimentReport, n| r.points.iter().find(|p| p.n_iter == n).unwrap().p;
    let sat = glqa.points.iter().filter(|p| p.n_iter >= 500).all(|p| p.p >= 0.15);
    let low = p_at(&lqa, 800) <= 0.10;
    let ratio = best_tts(&glqa) / best_tts(&lqa);
    outcome(
        sat && low && ratio <= 0.4,
        format!(
            "p_glqa(n_iter>=500) >= 0.15 [{sat}]; p_lqa(800) {:.3} [{low}]; TTS ratio {ratio:.3} [{}]",
            p_at(&lqa, 800),
            ratio <= 0.4
        ),
    )
}

// ---------------------------------------------------------------- 9

fn criterion_9() -> Outcome {
    let g = gen_torus_lattice(2).unwrap();
    let (gamma, dt) = (1.0, 0.2);
    let regime = [2usize, 4, 6, 8, 10, 12, 16, 20, 25, 30, 40, 50]
        .into_iter()
        .map(|n| (n, adiabatic_sweep(&g, gamma, n, dt, None, 0).unwrap().final_fidelity()))
        .find(|&(_, f)| (0.3..=0.9).contains(&f));
    let Some((n_steps, plain)) = regime else {
        return outcome(false, "no step count with unmeasured fidelity in [0.3, 0.9]");
    };
    let mut total = 0.0;
    let mut minus = 0;
    let seeds = 100;
    for seed in 0..seeds {
        let r = adiabatic_sweep(&g, gamma, n_steps, dt, Some(1), seed).unwrap();
        total += r.final_fidelity();
        minus += r.minus_outcomes;
    }
    let measured = total / seeds as f64;
    // measurement outcomes are +1 with certainty, so the two agree to rounding
    let zeno = measured >= plain - 1e-9;

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    for g in [gen_torus_lattice(2).unwrap(), gen_four_regular_dual(8, 3, 6).unwrap()] {
        let h = GaugeHamiltonian::new(&g).unwrap();
        for _ in 0..20 {
            let psi = QuantumState::random(g.n_links(), &mut rng);
            let coupling: f64 = rng.random_range(0.0..2.0);
            for v in 0..h.n_sites() {
                let hg = h.apply(1.0, coupling, &h.apply_gauge(v, psi.amplitudes()));
                let gh = h.apply_gauge(v, &h.apply(1.0, coupling, psi.amplitudes()));
                let norm = hg.iter().zip(&gh).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
                worst = worst.max(norm);
            }
        }
    }
    outcome(
        zeno && worst <= 1e-10,
        format!(
            "n_steps {n_steps}: unmeasured {plain:.6}, measured mean {measured:.6} over {seeds} seeds \
             ({minus} outcomes of -1); max commutator norm {worst:.1e}"
        ),
    )
}

// ---------------------------------------------------------------- 10

fn criterion_10() -> Outcome {
    let v = tts(1.0, 0.5).unwrap().unwrap();
    let a = (v - 6.6439).abs() <= 1e-3;
    let b = (1..=20).all(|k| tts(k as f64 * 0.37, 0.99).unwrap() == Some(k as f64 * 0.37));
    let grid: Vec<f64> = (1..=100).map(|k| 0.0099 * k as f64).collect();
    let values: Vec<f64> = grid.iter().map(|&p| tts(1.0, p).unwrap().unwrap()).collect();
    let c = values.windows(2).all(|w| w[1] < w[0]);
    outcome(a && b && c, format!("tts(1, 0.5) = {v:.4}; tts(t, 0.99) = t [{b}]; monotone [{c}]"))
}

fn main() {
    // honour `cargo test -- --list` and name filters by running everything
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    let mut results: Vec<(u32, Outcome, f64)> = Vec::new();
    let mut timed = |id: u32, f: &mut dyn FnMut() -> Outcome| {
        println!("criterion {id} ...");
        let start = Instant::now();
        let o = f();
        results.push((id, o, start.elapsed().as_secs_f64()));
        let (id, o, t) = results.last().unwrap();
        println!("{} criterion {id} ({t:.1}s): {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    };
    timed(1, &mut criterion_1);
    timed(2, &mut criterion_2);
    timed(3, &mut criterion_3);
    timed(4, &mut criterion_4);
    let mut fig3 = None;
    timed(5, &mut || {
        let (o, f) = criterion_5();
        fig3 = Some(f);
        o
    });
    timed(6, &mut criterion_6);
    timed(7, &mut criterion_7);
    let fig3 = fig3.expect("criterion 5 ran");
    timed(8, &mut || criterion_8(&fig3));
    timed(9, &mut criterion_9);
    timed(10, &mut criterion_10);

    println!("\nsummary");
    for (id, o, t) in &results {
        println!("  {} criterion {id:>2} ({t:.1}s)", if o.pass { "PASS" } else { "FAIL" });
    }
    let failed = results.iter().filter(|r| !r.1.pass).count();
    println!("{} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
