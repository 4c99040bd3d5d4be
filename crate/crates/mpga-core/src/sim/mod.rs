//! The executable MPGA: islands of individuals under Boltzmann selection,
//! periodic topology-constrained migration with random fill, optional
//! crossover and mutation, and the replication harness producing empirical
//! cumulant trajectories.

mod evolve;
mod island;
mod problem;
mod run;
mod select;

pub use evolve::{migrate, step_generation};
pub use island::{Individual, IslandState};
pub use problem::{Paramagnet, Problem};
pub use run::{
    aggregate_replications, run_experiment, run_replication, EmpiricalTrajectory,
    ReplicationTrajectory, SnapshotSpec,
};
pub use select::{accept_reject_select, boltzmann_select, WeightTable};

use core::fmt;

/// Genome representation shared by the built-in problems: a vector of +-1
/// genes.
pub type Genome = alloc::vec::Vec<i8>;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// N_P: individuals per island.
    pub island_population: usize,
    /// N_g: generations to evolve.
    pub n_generations: usize,
    /// Delta t_mig: generations between migration events.
    pub migration_period: usize,
    /// Fraction of N_P leaving each island at a migration event.
    pub r_mig: f64,
    pub r_cross: f64,
    pub r_mut: f64,
    /// Selection inverse temperature.
    pub beta: f64,
    pub master_seed: u64,
    pub replications: usize,
    /// Cumulant order K recorded per island and generation.
    pub cumulant_order: usize,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        let field = |name: &'static str, message: &'static str| {
            Err(SimError::InvalidConfig { field: name, message })
        };
        if self.island_population < 2 {
            return field("island_population", "must be >= 2");
        }
        if self.migration_period == 0 {
            return field("migration_period", "must be >= 1");
        }
        for (name, value) in [
            ("r_mig", self.r_mig),
            ("r_cross", self.r_cross),
            ("r_mut", self.r_mut),
        ] {
            if !(0.0..=1.0).contains(&value) || !value.is_finite() {
                return Err(SimError::InvalidConfig {
                    field: match name {
                        "r_mig" => "r_mig",
                        "r_cross" => "r_cross",
                        _ => "r_mut",
                    },
                    message: "must lie in [0, 1]",
                });
            }
        }
        if !self.beta.is_finite() {
            return field("beta", "must be finite");
        }
        if self.replications == 0 {
            return field("replications", "must be >= 1");
        }
        if self.cumulant_order < 2 {
            return field("cumulant_order", "must be >= 2");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SimError {
    InvalidConfig {
        field: &'static str,
        message: &'static str,
    },
    /// Accept/reject selection exhausted its draw budget (all acceptance
    /// probabilities effectively zero).
    AcceptanceBudget { attempts: u64 },
    /// A population came out of migration fill at the wrong size.
    PopulationSize {
        island: usize,
        expected: usize,
        got: usize,
    },
    EmptyPopulation,
    Stats(crate::stats::StatsError),
}

impl From<crate::stats::StatsError> for SimError {
    fn from(e: crate::stats::StatsError) -> Self {
        SimError::Stats(e)
    }
}

impl fmt::Display for SimError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimError::InvalidConfig { field, message } => write!(f, "config: {field} {message}"),
            SimError::AcceptanceBudget { attempts } => {
                write!(f, "accept/reject selection made no progress after {attempts} draws")
            }
            SimError::PopulationSize {
                island,
                expected,
                got,
            } => write!(
                f,
                "island {island} has {got} individuals after migration fill, expected {expected}"
            ),
            SimError::EmptyPopulation => write!(f, "population is empty"),
            SimError::Stats(e) => write!(f, "{e}"),
        }
    }
}
