use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use gauge_hubo::anneal::{AnnealerParams, Problem};
use gauge_hubo::bench::{run_experiment, run_sample, scaling_csv, scaling_sweep, Family, InstanceSpec, Solver, CSV_HEADER};
use gauge_hubo::graph::{build_dual, parse_ggraph, CycleRule, GGraph, HuboGraph, DEFAULT_KM};
use gauge_hubo::hubo::parse_instance_ordered;
use gauge_hubo::quantum::adiabatic_sweep;

mod config;

use config::{BenchMode, CliConfig, SimSection};

#[derive(Parser)]
#[command(name = "gauge-hubo", version, about = "HUBO solving via Z2 lattice gauge theory")]
struct Cli {
    /// TOML config with optional [solve], [sim] and [bench] sections.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args, Default)]
struct AnnealFlags {
    #[arg(long)]
    n_iter: Option<usize>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long = "B")]
    b: Option<f64>,
    #[arg(long)]
    init_scale: Option<f64>,
}

impl AnnealFlags {
    fn apply(&self, p: &mut AnnealerParams) {
        p.n_iter = self.n_iter.unwrap_or(p.n_iter);
        p.gamma = self.gamma.unwrap_or(p.gamma);
        p.eta = self.eta.unwrap_or(p.eta);
        p.mu = self.mu.unwrap_or(p.mu);
        p.b = self.b.unwrap_or(p.b);
        p.init_scale = self.init_scale.unwrap_or(p.init_scale);
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a benchmark G-graph.
    Generate {
        /// torus | 4rd
        family: Family,
        /// Torus side L, or vertex count of the four-regular graph.
        size: usize,
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_KM)]
        km: usize,
        /// Also write the plaquettes as a HUBO instance.
        #[arg(long)]
        hubo: Option<PathBuf>,
    },
    /// Map a HUBO instance to its G-graph.
    Map {
        hubo: PathBuf,
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_KM)]
        km: usize,
        /// faces | short-cycles
        #[arg(long, default_value = "faces")]
        cycles: CycleRule,
    },
    /// One solver run on a G-graph. Exit code 2 if the result misses the
    /// reference energy.
    Solve {
        ggraph: PathBuf,
        /// lqa | glqa | sa
        solver: Solver,
        #[command(flatten)]
        anneal: AnnealFlags,
        #[arg(long)]
        seed: Option<u64>,
        /// SA sweeps.
        #[arg(long)]
        sweeps: Option<usize>,
        #[arg(long)]
        beta_min: Option<f64>,
        #[arg(long)]
        beta_max: Option<f64>,
        /// Write the result as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Time-to-solution experiment from the [bench] config section.
    Bench {
        config: PathBuf,
        #[arg(long)]
        n_sam: Option<usize>,
        #[arg(long)]
        workers: Option<usize>,
        /// Master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output path prefix.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact state-vector annealing sweep (at most 16 links).
    Sim {
        ggraph: PathBuf,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        n_steps: Option<usize>,
        #[arg(long)]
        dt: Option<f64>,
        /// Measure every gauge operator after each m-th step.
        #[arg(long)]
        measure_every: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// CSV path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn auto_seed(given: Option<u64>) -> u64 {
    given.unwrap_or_else(|| {
        let s = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_nanos() as u64);
        eprintln!("no seed given, using {s}");
        s
    })
}

fn read_ggraph(path: &Path) -> Result<GGraph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_ggraph(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn summary(g: &GGraph) -> String {
    format!("links {} plaquettes {} sites {}", g.n_links(), g.n_plaquettes(), g.n_sites())
}

fn run(cli: Cli) -> Result<ExitCode> {
    let file = match &cli.config {
        Some(p) => config::load(p)?,
        None => CliConfig::default(),
    };
    match cli.cmd {
        Cmd::Generate { family, size, out, seed, km, hubo } => {
            let seed = match family {
                Family::Torus => seed.unwrap_or(0),
                Family::FourRegularDual => auto_seed(seed),
            };
            let spec = InstanceSpec { family, size, seed, k_m: km };
            println!("config {}", serde_json::to_string(&spec)?);
            let g = spec.build()?;
            write(&out, &g.to_text())?;
            if let Some(h) = hubo {
                write(&h, &g.to_instance().to_text())?;
            }
            println!("{}", summary(&g));
        }
        Cmd::Map { hubo, out, km, cycles } => {
            let text = fs::read_to_string(&hubo).with_context(|| format!("reading {}", hubo.display()))?;
            let inst = parse_instance_ordered(&text).with_context(|| format!("parsing {}", hubo.display()))?;
            let hg = HuboGraph::build_ordered(&inst)?;
            let g = build_dual(&hg, km, cycles)?;
            println!("config {{\"k_m\":{km},\"cycles\":{}}}", serde_json::to_string(&cycles)?);
            if g.n_sites() == 0 {
                eprintln!("warning: no gauge operators found");
            }
            write(&out, &g.to_text())?;
            println!("{}", summary(&g));
            println!("gauge operators {}", g.n_sites());
        }
        Cmd::Solve { ggraph, solver, anneal, seed, sweeps, beta_min, beta_max, json } => {
            let section = file.solve.unwrap_or_default();
            let mut ap = section.annealer.unwrap_or_default();
            anneal.apply(&mut ap);
            let mut sp = section.sa.unwrap_or_default();
            sp.sweeps = sweeps.unwrap_or(sp.sweeps);
            sp.beta_min = beta_min.unwrap_or(sp.beta_min);
            sp.beta_max = beta_max.unwrap_or(sp.beta_max);
            let seed = auto_seed(seed.or(section.annealer.map(|a| a.seed)));
            let g = read_ggraph(&ggraph)?;
            let problem = Problem::new(&g);
            let n_iter = if solver == Solver::Sa { sp.sweeps } else { ap.n_iter };
            ap.seed = seed;
            sp.seed = seed;
            match solver {
                Solver::Sa => println!("config {}", serde_json::to_string(&sp)?),
                _ => println!("config {}", serde_json::to_string(&ap)?),
            }
            let r = run_sample(&problem, solver, &ap, &sp, n_iter, seed)?;
            let reference = g.reference_energy();
            let success = r.energy == reference;
            println!("energy {}", r.energy);
            println!("reference {reference}");
            println!("success {success}");
            println!("wall_time_s {}", r.wall_time);
            if let Some(p) = json {
                let v = serde_json::json!({
                    "solver": solver,
                    "seed": seed,
                    "reference_energy": reference,
                    "success": success,
                    "result": r,
                });
                write(&p, &serde_json::to_string_pretty(&v)?)?;
            }
            return Ok(if success { ExitCode::SUCCESS } else { ExitCode::from(2) });
        }
        Cmd::Bench { config, n_sam, workers, seed, out } => {
            let mut b = config::load(&config)?
                .bench
                .with_context(|| format!("{} has no [bench] section", config.display()))?;
            b.n_sam = n_sam.unwrap_or(b.n_sam);
            b.workers = workers.or(b.workers);
            b.out = out.unwrap_or(b.out);
            b.master_seed = Some(auto_seed(seed.or(b.master_seed)));
            b.validate()?;
            let master = b.master_seed.unwrap_or_default();
            println!("config {}", serde_json::to_string(&b)?);
            let (csv, json) = match b.mode {
                BenchMode::Grid => {
                    let mut csv = format!("{CSV_HEADER}\n");
                    let mut reports = Vec::new();
                    for &s in &b.solvers {
                        let r = run_experiment(&b.experiment(s, master))?;
                        csv += &r.csv_rows();
                        match r.best_tts() {
                            Some(g) => println!(
                                "{} best n_iter {} p {} TTS_s {}",
                                s.name(),
                                g.n_iter,
                                g.p,
                                g.tts.unwrap_or(f64::INFINITY)
                            ),
                            None => println!("{} never reached the reference energy", s.name()),
                        }
                        reports.push(r);
                    }
                    (csv, serde_json::to_string_pretty(&reports)?)
                }
                BenchMode::Scaling => {
                    let tmpl = b.experiment(Solver::Glqa, master);
                    let rows = scaling_sweep(b.instance.family, &b.sizes, &tmpl, b.n_iter[0])?;
                    for r in &rows {
                        println!("size {} r_p {} r_TTS {}", r.size, r.r_p, r.r_tts);
                    }
                    (scaling_csv(b.instance.family, &rows), serde_json::to_string_pretty(&rows)?)
                }
            };
            write(&b.out.with_extension("csv"), &csv)?;
            write(&b.out.with_extension("json"), &json)?;
        }
        Cmd::Sim { ggraph, gamma, n_steps, dt, measure_every, seed, out } => {
            let mut s = file.sim.unwrap_or_else(SimSection::default);
            s.gamma = gamma.unwrap_or(s.gamma);
            s.n_steps = n_steps.unwrap_or(s.n_steps);
            s.dt = dt.unwrap_or(s.dt);
            s.measure_every = measure_every.or(s.measure_every);
            s.seed = Some(auto_seed(seed.or(s.seed)));
            let g = read_ggraph(&ggraph)?;
            eprintln!("config {}", serde_json::to_string(&s)?);
            let r = adiabatic_sweep(&g, s.gamma, s.n_steps, s.dt, s.measure_every, s.seed.unwrap_or_default())?;
            eprintln!(
                "final fidelity {} measurements {} minus outcomes {}",
                r.final_fidelity(),
                r.measurements,
                r.minus_outcomes
            );
            match out {
                Some(p) => write(&p, &r.to_csv())?,
                None => print!("{}", r.to_csv()),
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
