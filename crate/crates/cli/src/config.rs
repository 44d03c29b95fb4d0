//! TOML config file: one optional section per command, flags override.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use gauge_hubo::anneal::{AnnealerParams, SaParams};
use gauge_hubo::bench::{ExperimentConfig, Family, InstanceSpec, Solver};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct CliConfig {
    pub solve: Option<SolveSection>,
    pub sim: Option<SimSection>,
    pub bench: Option<BenchSection>,
}

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SolveSection {
    #[serde(default)]
    pub annealer: Option<AnnealerParams>,
    #[serde(default)]
    pub sa: Option<SaParams>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimSection {
    pub gamma: f64,
    pub n_steps: usize,
    pub dt: f64,
    pub measure_every: Option<usize>,
    pub seed: Option<u64>,
}

impl Default for SimSection {
    fn default() -> Self {
        Self {
            gamma: 1.0,
            n_steps: 100,
            dt: 0.1,
            measure_every: None,
            seed: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BenchMode {
    /// One report per solver over the `n_iter` grid.
    #[default]
    Grid,
    /// LQA vs gLQA ratios over `sizes` at the single `n_iter` value.
    Scaling,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct BenchSection {
    #[serde(default)]
    pub mode: BenchMode,
    pub instance: InstanceSpec,
    pub solvers: Vec<Solver>,
    #[serde(default)]
    pub sizes: Vec<usize>,
    #[serde(default)]
    pub annealer: AnnealerParams,
    #[serde(default)]
    pub sa: SaParams,
    pub n_sam: usize,
    pub n_iter: Vec<usize>,
    #[serde(default)]
    pub reference_energy: Option<f64>,
    #[serde(default)]
    pub master_seed: Option<u64>,
    #[serde(default)]
    pub workers: Option<usize>,
    /// Output path prefix; `.csv` and `.json` are appended.
    pub out: PathBuf,
}

impl BenchSection {
    pub fn experiment(&self, solver: Solver, master_seed: u64) -> ExperimentConfig {
        ExperimentConfig {
            instance: self.instance,
            solver,
            annealer: self.annealer,
            sa: self.sa,
            n_sam: self.n_sam,
            n_iter: self.n_iter.clone(),
            reference_energy: self.reference_energy,
            master_seed,
            workers: self.workers,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.solvers.is_empty() {
            bail!("bench: `solvers` must not be empty");
        }
        for &s in &self.solvers {
            self.experiment(s, 0).validate().context("bench")?;
        }
        if self.mode == BenchMode::Scaling {
            if self.sizes.is_empty() {
                bail!("bench: scaling mode needs `sizes`");
            }
            if self.n_iter.len() != 1 {
                bail!("bench: scaling mode takes exactly one `n_iter` value");
            }
            if self.instance.family == Family::FourRegularDual && self.sizes.iter().any(|&n| n < 5) {
                bail!("bench: four-regular graphs need at least 5 vertices");
            }
        }
        if let Some(dir) = self.out.parent().filter(|d| !d.as_os_str().is_empty()) {
            if !dir.is_dir() {
                bail!("bench: output directory {} does not exist", dir.display());
            }
        }
        Ok(())
    }
}

pub fn load(path: &Path) -> Result<CliConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}
