//! 2D Ising model machinery: periodic spin lattice with cached energy and
//! magnetization, single-spin-flip Metropolis dynamics, spin-configuration
//! crossover, exact enumeration for desk-scale lattices, thermodynamic
//! observables and the MPGA/Metropolis thermalization hybrid.

mod exact;
mod hybrid;
mod lattice;
mod metropolis;
mod observables;

pub use exact::exact_thermo;
pub use hybrid::{mpga_mh_run, plain_mh_thermo, CrossoverKind, HybridConfig, HybridMode};
pub use lattice::{ising_energy, spin_crossover, uniform_spin_crossover, SpinLattice};
pub use metropolis::mh_sweep;
pub use observables::{ObservableAccumulator, Thermo};

use core::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum IsingError {
    /// Exact enumeration is limited to 2^(L^2) states, L <= 4.
    LatticeTooLarge { l: usize },
    /// Crossover requires equal lattice sizes.
    SizeMismatch { a: usize, b: usize },
    NonPositiveTemperature { t: f64 },
    /// Thermalization cutoff must leave measurement generations.
    BadCutoff { therm_cutoff: usize, n_generations: usize },
    NoSamples,
    Sim(crate::sim::SimError),
}

impl From<crate::sim::SimError> for IsingError {
    fn from(e: crate::sim::SimError) -> Self {
        IsingError::Sim(e)
    }
}

impl fmt::Display for IsingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IsingError::LatticeTooLarge { l } => {
                write!(f, "exact enumeration supports L <= 4, got {l}")
            }
            IsingError::SizeMismatch { a, b } => write!(f, "lattice sizes differ: {a} vs {b}"),
            IsingError::NonPositiveTemperature { t } => write!(f, "temperature {t} must be > 0"),
            IsingError::BadCutoff {
                therm_cutoff,
                n_generations,
            } => write!(
                f,
                "thermalization cutoff {therm_cutoff} must be < total generations {n_generations}"
            ),
            IsingError::NoSamples => write!(f, "no measurement samples"),
            IsingError::Sim(e) => write!(f, "{e}"),
        }
    }
}
