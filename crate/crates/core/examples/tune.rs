//! Grid search over annealer hyperparameters.
//!
//! ```text
//! cargo run --release --example tune -- <torus|4rd> <size> <n_sam> \
//!     <n_iter,..> <gamma,..> <eta,..> <mu,..> <B,..> <init_scale,..>
//! ```
//!
//! For each base point prints success probability and TTS for every B
//! (B = 0 is plain LQA).

use gauge_hubo::anneal::AnnealerParams;
use gauge_hubo::bench::{run_on_graph, ExperimentConfig, Family, InstanceSpec, Solver};

fn list(arg: &str) -> Vec<f64> {
    arg.split(',').map(|x| x.parse().expect("number")).collect()
}

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.len() != 9 {
        eprintln!("usage: tune <family> <size> <n_sam> <n_iter> <gamma> <eta> <mu> <B> <init_scale>");
        std::process::exit(1);
    }
    let family: Family = args[0].parse().unwrap();
    let instance = InstanceSpec { family, size: args[1].parse().unwrap(), seed: 1, k_m: 6 };
    let g = instance.build().unwrap();
    eprintln!("links {} sites {}", g.n_links(), g.n_sites());
    let n_sam = args[2].parse().unwrap();
    let grids: Vec<Vec<f64>> = args[3..].iter().map(|a| list(a)).collect();
    for &n_iter in &grids[0] {
        for &gamma in &grids[1] {
            for &eta in &grids[2] {
                for &mu in &grids[3] {
                    for &init_scale in &grids[5] {
                        let mut line = format!("n_iter={n_iter} gamma={gamma} eta={eta} mu={mu} init={init_scale}:");
                        for &b in &grids[4] {
                            let annealer = AnnealerParams { gamma, eta, mu, b, init_scale, ..Default::default() };
                            let cfg = ExperimentConfig {
                                instance,
                                solver: Solver::Glqa,
                                annealer,
                                sa: Default::default(),
                                n_sam,
                                n_iter: vec![n_iter as usize],
                                reference_energy: None,
                                master_seed: 1,
                                workers: None,
                            };
                            let pt = &run_on_graph(&cfg, &g).unwrap().points[0];
                            line += &format!(
                                "  B={b} p={:.3} emin={} emed={} tp={:.2}ms",
                                pt.p,
                                pt.e_min.unwrap_or(f64::NAN),
                                pt.e_med.unwrap_or(f64::NAN),
                                pt.t_p_mean * 1e3
                            );
                        }
                        println!("{line}");
                    }
                }
            }
        }
    }
}
