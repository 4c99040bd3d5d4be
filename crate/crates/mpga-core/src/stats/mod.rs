//! Numerical primitives shared by the theory engine and the simulator:
//! probabilists' Hermite polynomials, cumulant/moment conversion, plain
//! sample cumulants, Gram-Charlier densities and truncated power series.

mod cumulants;
mod gram_charlier;
mod hermite;
mod series;

pub use cumulants::{
    cumulants_from_moments, moments_from_cumulants, sample_cumulants, CumulantVector,
    MomentVector, DEFAULT_ORDER,
};
pub use gram_charlier::{gram_charlier_pdf, gram_charlier_valid};
pub use hermite::hermite;
pub use series::TruncatedSeries;

use core::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum StatsError {
    /// A second cumulant came out negative; the vector does not describe a
    /// distribution and must not be clamped silently.
    NegativeVariance { kappa2: f64 },
    /// The density requires kappa_2 > 0.
    NonPositiveVariance { kappa2: f64 },
    /// Sample statistics need at least two values.
    TooFewSamples { len: usize },
    /// Cumulant vectors carry at least kappa_1, kappa_2.
    OrderTooSmall { order: usize },
    /// Series arithmetic requires matching expansion centers.
    CenterMismatch { left: f64, right: f64 },
    /// Series arithmetic requires matching truncation orders.
    OrderMismatch { left: usize, right: usize },
    /// Requested derivative exceeds the truncation order.
    DerivativeOrder { wanted: usize, order: usize },
}

impl fmt::Display for StatsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StatsError::NegativeVariance { kappa2 } => {
                write!(f, "negative second cumulant {kappa2}")
            }
            StatsError::NonPositiveVariance { kappa2 } => {
                write!(f, "second cumulant {kappa2} is not positive")
            }
            StatsError::TooFewSamples { len } => {
                write!(f, "need at least 2 samples, got {len}")
            }
            StatsError::OrderTooSmall { order } => {
                write!(f, "cumulant order must be >= 2, got {order}")
            }
            StatsError::CenterMismatch { left, right } => {
                write!(f, "series centers differ: {left} vs {right}")
            }
            StatsError::OrderMismatch { left, right } => {
                write!(f, "series orders differ: {left} vs {right}")
            }
            StatsError::DerivativeOrder { wanted, order } => {
                write!(f, "derivative order {wanted} exceeds series order {order}")
            }
        }
    }
}

/// n! as f64; exact for the small orders used here.
pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Binomial coefficient as f64.
pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}
