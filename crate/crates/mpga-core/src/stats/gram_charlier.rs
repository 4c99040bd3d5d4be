use super::{hermite, CumulantVector, StatsError};

const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

/// Gram-Charlier density (1 + Psi(x)) N(x) / sqrt(kappa_2) at fitness `f`,
/// with x = (f - kappa_1)/sqrt(kappa_2) and Psi the Hermite series with
/// coefficients a_i = kappa_i/(i! kappa_2^{i/2}), truncated at the stored
/// order.
///
/// The returned value is signed: the expansion can go negative for large
/// |a_3|, |a_4|. Use [`gram_charlier_valid`] to check nonnegativity.
pub fn gram_charlier_pdf(kappa: &CumulantVector, f: f64) -> Result<f64, StatsError> {
    let k2 = kappa.variance();
    if k2 <= 0.0 {
        return Err(StatsError::NonPositiveVariance { kappa2: k2 });
    }
    let sigma = libm::sqrt(k2);
    let x = (f - kappa.mean()) / sigma;
    let mut psi = 0.0;
    for i in 3..=kappa.order() {
        let a = kappa.gc_coefficient(i);
        if a != 0.0 {
            psi += a * hermite(i as u32, x);
        }
    }
    Ok((1.0 + psi) * libm::exp(-0.5 * x * x) / (SQRT_2PI * sigma))
}

/// Whether the density stays nonnegative on a uniform grid over
/// kappa_1 +- 6 sigma (the expansion's validity predicate).
pub fn gram_charlier_valid(kappa: &CumulantVector) -> Result<bool, StatsError> {
    let k2 = kappa.variance();
    if k2 <= 0.0 {
        return Err(StatsError::NonPositiveVariance { kappa2: k2 });
    }
    let sigma = libm::sqrt(k2);
    let steps = 1200;
    for i in 0..=steps {
        let f = kappa.mean() + sigma * (-6.0 + 12.0 * i as f64 / steps as f64);
        if gram_charlier_pdf(kappa, f)? < 0.0 {
            return Ok(false);
        }
    }
    Ok(true)
}
