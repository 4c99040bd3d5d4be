//! Pairwise Kullback-Leibler divergences between island fitness distributions
//! from their cumulants (Gaussian closed form plus the second-order
//! Gram-Charlier correction), and the weighted directed dissimilarity graph.

mod divergence;
mod graph;

pub use divergence::{
    entropy_gc, gaussian_kl, histogram_kl, kl_correction, kl_total, kl_truncation_terms,
    scaled_hermite, EntropyTerms, StandardizedPair,
};
pub use graph::{build_kl_graph, GraphSource, KLGraph};

use core::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum KlError {
    /// Both variances must be positive for a divergence.
    NonPositiveVariance { kappa2: f64 },
}

impl fmt::Display for KlError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KlError::NonPositiveVariance { kappa2 } => {
                write!(f, "second cumulant {kappa2} is not positive")
            }
        }
    }
}
