//! JSON config schemas for the command pipelines. Paths inside a config are
//! resolved relative to the config file's directory. Passing a manifest file
//! instead of a config reruns the recorded configuration.

use std::path::{Path, PathBuf};

use mpga_core::sim::{Paramagnet, RunConfig};
use mpga_core::stats::CumulantVector;
use serde::{Deserialize, Serialize};

use crate::AppError;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub paramagnet: ParamagnetSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ParamagnetSpec {
    pub length: usize,
}

impl ProblemSpec {
    pub fn build(&self) -> Result<Paramagnet, AppError> {
        if self.paramagnet.length == 0 {
            return Err(AppError::config("problem.paramagnet.length must be >= 1"));
        }
        Ok(Paramagnet::new(self.paramagnet.length))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SnapshotConfig {
    pub replication: usize,
    pub generations: Vec<usize>,
}

/// `mpga simulate` configuration.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    pub islands: usize,
    pub population: usize,
    pub generations: usize,
    pub migration_period: usize,
    pub migration_rate: f64,
    #[serde(default)]
    pub crossover_rate: f64,
    #[serde(default)]
    pub mutation_rate: f64,
    pub beta: f64,
    #[serde(default = "default_order")]
    pub cumulant_order: usize,
    pub topology: PathBuf,
    pub problem: ProblemSpec,
    pub seed: u64,
    pub replications: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snapshots: Option<SnapshotConfig>,
}

fn default_order() -> usize {
    mpga_core::stats::DEFAULT_ORDER
}

impl SimulateConfig {
    pub fn run_config(&self) -> Result<RunConfig, AppError> {
        if self.islands == 0 {
            return Err(AppError::config("islands must be >= 1"));
        }
        let cfg = RunConfig {
            island_population: self.population,
            n_generations: self.generations,
            migration_period: self.migration_period,
            r_mig: self.migration_rate,
            r_cross: self.crossover_rate,
            r_mut: self.mutation_rate,
            beta: self.beta,
            master_seed: self.seed,
            replications: self.replications,
            cumulant_order: self.cumulant_order,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub enum BackgroundSpec {
    /// Explicit background cumulants kappa_1..kappa_K.
    Cumulants(Vec<f64>),
    /// Analytic Gaussian background of a problem's random genomes.
    Paramagnet(ParamagnetSpec),
}

impl BackgroundSpec {
    pub fn build(&self, order: usize) -> Result<CumulantVector, AppError> {
        match self {
            BackgroundSpec::Cumulants(values) => Ok(CumulantVector::new(values.clone())
                .map_err(|e| AppError::config(format!("background.cumulants: {e}")))?
                .resized(order)?),
            BackgroundSpec::Paramagnet(p) => {
                Ok(CumulantVector::gaussian(0.0, p.length as f64, order)?)
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub enum InitialSpec {
    /// Per-island initial cumulant vectors.
    Cumulants(Vec<Vec<f64>>),
    /// Generation-0 rows of an empirical trajectory CSV.
    FromEmpirical(PathBuf),
}

/// `mpga theory` configuration.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TheoryConfig {
    pub generations: usize,
    pub migration_period: usize,
    pub migration_rate: f64,
    pub beta: f64,
    pub population: u64,
    #[serde(default = "default_order")]
    pub cumulant_order: usize,
    pub topology: PathBuf,
    pub background: BackgroundSpec,
    pub initial: InitialSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum IsingMode {
    Mpga,
    Mh,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, untagged)]
pub enum TemperatureSpec {
    List(Vec<f64>),
    Grid { start: f64, stop: f64, step: f64 },
}

impl TemperatureSpec {
    pub fn values(&self) -> Result<Vec<f64>, AppError> {
        let values = match self {
            TemperatureSpec::List(v) => v.clone(),
            TemperatureSpec::Grid { start, stop, step } => {
                if *step <= 0.0 {
                    return Err(AppError::config("temperatures.step must be > 0"));
                }
                let n = ((stop - start) / step + 0.5).floor() as usize;
                (0..=n).map(|i| start + i as f64 * step).collect()
            }
        };
        if values.is_empty() {
            return Err(AppError::config("temperatures must be non-empty"));
        }
        if values.iter().any(|&t| t <= 0.0) {
            return Err(AppError::config("temperatures must be > 0"));
        }
        Ok(values)
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Default)]
#[serde(rename_all = "snake_case")]
pub enum CrossoverKindSpec {
    #[default]
    Patch,
    Uniform,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ReferenceSpec {
    pub therm_sweeps: usize,
    pub measure_sweeps: usize,
}

/// `mpga ising` configuration. With `budgets` present the command runs the
/// error-vs-budget comparison (both methods against the long-Metropolis
/// reference); otherwise it emits one thermodynamic series for `mode`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct IsingConfig {
    pub lattice: usize,
    pub islands: usize,
    pub population: usize,
    pub generations: usize,
    pub therm_cutoff: usize,
    pub migration_period: usize,
    pub migration_rate: f64,
    pub crossover_rate: f64,
    #[serde(default)]
    pub crossover_kind: CrossoverKindSpec,
    pub topology: PathBuf,
    pub temperatures: TemperatureSpec,
    #[serde(default = "default_mode")]
    pub mode: IsingMode,
    pub seed: u64,
    #[serde(default = "default_experiments")]
    pub experiments: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budgets: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<ReferenceSpec>,
}

fn default_mode() -> IsingMode {
    IsingMode::Mpga
}

fn default_experiments() -> usize {
    1
}

impl IsingConfig {
    pub fn validate(&self) -> Result<(), AppError> {
        if self.lattice == 0 {
            return Err(AppError::config("lattice must be >= 1"));
        }
        if self.population == 0 {
            return Err(AppError::config("population must be >= 1"));
        }
        if self.therm_cutoff >= self.generations {
            return Err(AppError::config(
                "therm_cutoff must be < generations (no measurement phase left)",
            ));
        }
        if self.migration_period == 0 {
            return Err(AppError::config("migration_period must be >= 1"));
        }
        if !(0.0..=1.0).contains(&self.migration_rate) {
            return Err(AppError::config("migration_rate must lie in [0, 1]"));
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) {
            return Err(AppError::config("crossover_rate must lie in [0, 1]"));
        }
        if self.experiments == 0 {
            return Err(AppError::config("experiments must be >= 1"));
        }
        if let Some(budgets) = &self.budgets {
            if budgets.is_empty() {
                return Err(AppError::config("budgets must be non-empty when present"));
            }
            if budgets.iter().any(|&b| b <= self.therm_cutoff) {
                return Err(AppError::config("every budget must exceed therm_cutoff"));
            }
            if self.reference.is_none() {
                return Err(AppError::config("budgets require a reference section"));
            }
        }
        Ok(())
    }
}

/// Read a config of type T from `path`. A manifest file (top-level "config"
/// key) is unwrapped so any run can be reproduced from its manifest.
pub fn load_config<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, AppError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| AppError::Io(format!("{}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| AppError::config(format!("{}: {e}", path.display())))?;
    let payload = match value.get("config") {
        Some(inner) if value.get("outputs").is_some() => inner.clone(),
        _ => value,
    };
    serde_json::from_value(payload).map_err(|e| AppError::config(format!("{}: {e}", path.display())))
}

/// Resolve a path mentioned inside a config relative to the config file.
pub fn resolve_path(config_path: &Path, inner: &Path) -> PathBuf {
    if inner.is_absolute() {
        inner.to_path_buf()
    } else {
        config_path
            .parent()
            .unwrap_or_else(|| Path::new("."))
            .join(inner)
    }
}
