//! Analytical propagation of per-island cumulant vectors: the finite-population
//! Boltzmann selection update on every generation, migration mixing on
//! migration generations.

mod migration;
mod selection;
mod topology;
mod trajectory;

pub use migration::{migration_update, BackgroundDistribution, MigrationRates, THETA_EPS};
pub use selection::selection_update_boltzmann;
pub use topology::Topology;
pub use trajectory::{predict_trajectory, TheoryParams, TheoryTrajectory};

use crate::stats::StatsError;
use core::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum TheoryError {
    NonSquare { rows: usize, cols: usize },
    NonBinary { row: usize, col: usize, value: f64 },
    /// Eq. 3 denominator n0 + n_m + n_r Theta(n_r) must stay positive.
    ZeroDenominator { island: usize },
    RateOutOfRange { r_mig: f64 },
    PopulationTooSmall { n_pop: u64 },
    IslandCountMismatch { expected: usize, got: usize },
    MigrationPeriodZero,
    /// A propagated cumulant update produced kappa_2 < 0: selection too strong
    /// for the truncation. Annotated with where it happened.
    NegativeVariance {
        generation: usize,
        island: usize,
        kappa2: f64,
    },
    Stats(StatsError),
}

impl From<StatsError> for TheoryError {
    fn from(e: StatsError) -> Self {
        TheoryError::Stats(e)
    }
}

impl fmt::Display for TheoryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TheoryError::NonSquare { rows, cols } => {
                write!(f, "adjacency matrix is {rows}x{cols}, expected square")
            }
            TheoryError::NonBinary { row, col, value } => {
                write!(f, "adjacency entry ({row},{col}) = {value}, expected 0 or 1")
            }
            TheoryError::ZeroDenominator { island } => {
                write!(f, "migration denominator vanished for island {island}")
            }
            TheoryError::RateOutOfRange { r_mig } => {
                write!(f, "migration rate {r_mig} outside [0, 1]")
            }
            TheoryError::PopulationTooSmall { n_pop } => {
                write!(f, "population size {n_pop} must be >= 2")
            }
            TheoryError::IslandCountMismatch { expected, got } => {
                write!(f, "expected {expected} cumulant vectors, got {got}")
            }
            TheoryError::MigrationPeriodZero => write!(f, "migration period must be >= 1"),
            TheoryError::NegativeVariance {
                generation,
                island,
                kappa2,
            } => write!(
                f,
                "kappa_2 = {kappa2} < 0 at generation {generation}, island {island}"
            ),
            TheoryError::Stats(e) => write!(f, "{e}"),
        }
    }
}
