//! Time-to-solution benchmarking of the samplers.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::anneal::{AnnealerParams, Problem, SaParams};
use crate::error::{Error, Result};
use crate::graph::{gen_four_regular_dual, gen_torus_lattice, GGraph, DEFAULT_KM};
use crate::parallel::{derive_seed, map_samples};

/// Target confidence of a time-to-solution estimate.
pub const TTS_TARGET: f64 = 0.99;

/// `t_p ln(1 - 0.99) / ln(1 - p)`. `None` when `p = 0`; `t_p` itself when
/// `p >= 0.99`.
pub fn tts(t_p: f64, p: f64) -> Result<Option<f64>> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("success probability {p} outside [0, 1]")));
    }
    if !(t_p >= 0.0 && t_p.is_finite()) {
        return Err(Error::InvalidParameter(format!("sample time {t_p} must be finite and non-negative")));
    }
    Ok(if p == 0.0 {
        None
    } else if p >= TTS_TARGET {
        Some(t_p)
    } else {
        Some(t_p * (1.0 - TTS_TARGET).ln() / (1.0 - p).ln())
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Torus,
    FourRegularDual,
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "torus" => Ok(Self::Torus),
            "4rd" | "four-regular-dual" => Ok(Self::FourRegularDual),
            _ => Err(format!("unknown family `{s}` (torus | 4rd)")),
        }
    }
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Self::Torus => "torus",
            Self::FourRegularDual => "four-regular-dual",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Solver {
    Lqa,
    Glqa,
    Sa,
}

impl FromStr for Solver {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "lqa" => Ok(Self::Lqa),
            "glqa" => Ok(Self::Glqa),
            "sa" => Ok(Self::Sa),
            _ => Err(format!("unknown solver `{s}` (lqa | glqa | sa)")),
        }
    }
}

impl Solver {
    pub fn name(self) -> &'static str {
        match self {
            Self::Lqa => "lqa",
            Self::Glqa => "glqa",
            Self::Sa => "sa",
        }
    }
}

fn default_km() -> usize {
    DEFAULT_KM
}

/// A generated instance: torus side `L`, or vertex count of the four-regular
/// graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    pub family: Family,
    pub size: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_km")]
    pub k_m: usize,
}

impl InstanceSpec {
    pub fn build(&self) -> Result<GGraph> {
        match self.family {
            Family::Torus => gen_torus_lattice(self.size),
            Family::FourRegularDual => gen_four_regular_dual(self.size, self.seed, self.k_m),
        }
    }
}

/// Run one sample. For SA, `n_iter` is the sweep count.
pub fn run_sample(
    problem: &Problem,
    solver: Solver,
    annealer: &AnnealerParams,
    sa: &SaParams,
    n_iter: usize,
    seed: u64,
) -> Result<crate::anneal::SampleResult> {
    match solver {
        Solver::Lqa => problem.lqa_run(&AnnealerParams { n_iter, seed, ..*annealer }),
        Solver::Glqa => problem.glqa_run(&AnnealerParams { n_iter, seed, ..*annealer }),
        Solver::Sa => problem.sa_run(&SaParams { sweeps: n_iter, seed, ..*sa }),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub instance: InstanceSpec,
    pub solver: Solver,
    #[serde(default)]
    pub annealer: AnnealerParams,
    #[serde(default)]
    pub sa: SaParams,
    pub n_sam: usize,
    pub n_iter: Vec<usize>,
    /// Energy counted as a success; `-sum |J_p|` when absent.
    #[serde(default)]
    pub reference_energy: Option<f64>,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default)]
    pub workers: Option<usize>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_sam == 0 {
            return Err(Error::InvalidParameter("n_sam must be positive".into()));
        }
        if self.n_iter.is_empty() || self.n_iter.contains(&0) {
            return Err(Error::InvalidParameter("n_iter grid must be non-empty and positive".into()));
        }
        if self.workers == Some(0) {
            return Err(Error::InvalidParameter("workers must be positive".into()));
        }
        match self.solver {
            Solver::Sa => self.sa.validate(),
            _ => self.annealer.validate(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub n_iter: usize,
    pub n_sam: usize,
    pub n_sol: usize,
    pub n_failed: usize,
    /// Over samples that did not fail; `None` if all failed.
    pub e_min: Option<f64>,
    /// Lower median.
    pub e_med: Option<f64>,
    pub p: f64,
    pub t_p_mean: f64,
    pub t_p_median: f64,
    /// `None` when no sample succeeded.
    pub tts: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub family: Family,
    pub size: usize,
    pub solver: Solver,
    pub n_links: usize,
    pub n_sites: usize,
    pub reference_energy: f64,
    pub master_seed: u64,
    pub points: Vec<GridPoint>,
}

pub const CSV_HEADER: &str = "family,size,solver,n_iter,n_sam,E_min,E_med,p,t_p_mean_s,TTS_s";

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl ExperimentReport {
    pub fn csv_rows(&self) -> String {
        let mut out = String::new();
        for g in &self.points {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                self.family.name(),
                self.size,
                self.solver.name(),
                g.n_iter,
                g.n_sam,
                opt(g.e_min),
                opt(g.e_med),
                g.p,
                g.t_p_mean,
                g.tts.map_or_else(|| "inf".to_string(), |t| t.to_string()),
            );
        }
        out
    }

    pub fn to_csv(&self) -> String {
        format!("{CSV_HEADER}\n{}", self.csv_rows())
    }

    /// Grid point with the smallest finite TTS.
    pub fn best_tts(&self) -> Option<&GridPoint> {
        self.points
            .iter()
            .filter(|g| g.tts.is_some())
            .min_by(|a, b| a.tts.partial_cmp(&b.tts).expect("finite TTS"))
    }
}

fn lower_median(sorted: &[f64]) -> Option<f64> {
    if sorted.is_empty() {
        None
    } else {
        Some(sorted[(sorted.len() - 1) / 2])
    }
}

fn aggregate(n_iter: usize, reference: f64, samples: &[(Option<f64>, f64)]) -> Result<GridPoint> {
    let n_sam = samples.len();
    let mut energies: Vec<f64> = samples.iter().filter_map(|s| s.0).collect();
    energies.sort_by(f64::total_cmp);
    let n_sol = energies.iter().filter(|&&e| e == reference).count();
    let mut times: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let t_p_mean = times.iter().sum::<f64>() / n_sam as f64;
    times.sort_by(f64::total_cmp);
    let p = n_sol as f64 / n_sam as f64;
    Ok(GridPoint {
        n_iter,
        n_sam,
        n_sol,
        n_failed: n_sam - energies.len(),
        e_min: energies.first().copied(),
        e_med: lower_median(&energies),
        p,
        t_p_mean,
        t_p_median: lower_median(&times).unwrap_or(0.0),
        tts: tts(t_p_mean, p)?,
    })
}

/// Sample seeds depend only on the master seed and sample index, so every
/// grid point sees the same initial states.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let g = cfg.instance.build()?;
    run_on_graph(cfg, &g)
}

/// [`run_experiment`] on an already generated instance.
pub fn run_on_graph(cfg: &ExperimentConfig, g: &GGraph) -> Result<ExperimentReport> {
    cfg.validate()?;
    let problem = Problem::new(g);
    let reference = cfg.reference_energy.unwrap_or_else(|| g.reference_energy());
    let mut points = Vec::with_capacity(cfg.n_iter.len());
    for &n_iter in &cfg.n_iter {
        let samples = map_samples(cfg.n_sam, cfg.workers, |i| {
            let seed = derive_seed(cfg.master_seed, i as u64);
            let start = Instant::now();
            let r = run_sample(&problem, cfg.solver, &cfg.annealer, &cfg.sa, n_iter, seed);
            (r.ok().map(|r| r.energy), start.elapsed().as_secs_f64())
        });
        points.push(aggregate(n_iter, reference, &samples)?);
    }
    Ok(ExperimentReport {
        family: cfg.instance.family,
        size: cfg.instance.size,
        solver: cfg.solver,
        n_links: g.n_links(),
        n_sites: g.n_sites(),
        reference_energy: reference,
        master_seed: cfg.master_seed,
        points,
    })
}

/// `numerator / denominator` with `x / 0 = inf` for `x > 0`, `NaN` for
/// `0 / 0`.
fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        if num == 0.0 {
            f64::NAN
        } else {
            f64::INFINITY
        }
    } else {
        num / den
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub size: usize,
    pub n_links: usize,
    pub lqa: GridPoint,
    pub glqa: GridPoint,
    /// `p_gLQA / p_LQA`, infinite when only LQA never succeeds.
    pub r_p: f64,
    /// `TTS_gLQA / TTS_LQA` with unattainable TTS treated as infinite.
    pub r_tts: f64,
}

impl ScalingRow {
    pub fn lqa_unattainable(&self) -> bool {
        self.lqa.p == 0.0
    }
}

/// Runs LQA and gLQA at a single `n_iter` for each size. The template's
/// `solver` and `n_iter` are ignored.
pub fn scaling_sweep(
    family: Family,
    sizes: &[usize],
    template: &ExperimentConfig,
    n_iter: usize,
) -> Result<Vec<ScalingRow>> {
    scaling_sweep_with(family, sizes, template, template, n_iter)
}

/// [`scaling_sweep`] with separately tuned LQA and gLQA configurations.
pub fn scaling_sweep_with(
    family: Family,
    sizes: &[usize],
    lqa_cfg: &ExperimentConfig,
    glqa_cfg: &ExperimentConfig,
    n_iter: usize,
) -> Result<Vec<ScalingRow>> {
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("sizes must be strictly ascending".into()));
    }
    let prepare = |base: &ExperimentConfig, solver, size| {
        let mut cfg = base.clone();
        cfg.instance.family = family;
        cfg.instance.size = size;
        cfg.n_iter = vec![n_iter];
        cfg.solver = solver;
        cfg
    };
    let mut rows = Vec::with_capacity(sizes.len());
    for &size in sizes {
        let l_cfg = prepare(lqa_cfg, Solver::Lqa, size);
        let g_cfg = prepare(glqa_cfg, Solver::Glqa, size);
        let g = l_cfg.instance.build()?;
        let lqa = run_on_graph(&l_cfg, &g)?.points.remove(0);
        let glqa = run_on_graph(&g_cfg, &g)?.points.remove(0);
        let inf = f64::INFINITY;
        rows.push(ScalingRow {
            size,
            n_links: g.n_links(),
            r_p: ratio(glqa.p, lqa.p),
            r_tts: ratio(glqa.tts.unwrap_or(inf), lqa.tts.unwrap_or(inf)),
            lqa,
            glqa,
        });
    }
    Ok(rows)
}

pub fn scaling_csv(family: Family, rows: &[ScalingRow]) -> String {
    let mut out = String::from("family,size,n_links,p_lqa,p_glqa,TTS_lqa_s,TTS_glqa_s,r_p,r_TTS\n");
    let t = |g: &GridPoint| g.tts.map_or_else(|| "inf".to_string(), |x| x.to_string());
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            family.name(),
            r.size,
            r.n_links,
            r.lqa.p,
            r.glqa.p,
            t(&r.lqa),
            t(&r.glqa),
            r.r_p,
            r.r_tts
        );
    }
    out
}
