use super::TheoryError;
use crate::stats::{CumulantVector, TruncatedSeries};

/// Orders of series headroom beyond the cumulant order, so derivative
/// extraction at the top order is exact.
const SERIES_HEADROOM: usize = 2;

/// One generation of finite-population Boltzmann selection on a cumulant
/// vector:
///
/// kappa_i' = lim_{u -> -beta} d^i/du^i [ sum_j u^j kappa_j / j!
///            - exp( sum_j (2^j - 2) u^j kappa_j / j! ) / (2 N_P) ]
///
/// Both sums run over the stored cumulant order (higher cumulants are closed
/// at zero); derivatives are extracted exactly from truncated series centered
/// at u = -beta.
///
/// Fails with the offending kappa_2 when the update drives the variance
/// negative (selection too strong for the truncation).
pub fn selection_update_boltzmann(
    kappa: &CumulantVector,
    beta: f64,
    n_pop: u64,
) -> Result<CumulantVector, TheoryError> {
    if n_pop < 2 {
        return Err(TheoryError::PopulationTooSmall { n_pop });
    }
    let order = kappa.order();
    let series_order = order + SERIES_HEADROOM;
    let center = -beta;

    let tilt = TruncatedSeries::from_polynomial(center, order, series_order, |j| {
        kappa.kappa(j) / crate::stats::factorial(j)
    });
    let drift_exponent = TruncatedSeries::from_polynomial(center, order, series_order, |j| {
        ((1u64 << j) as f64 - 2.0) * kappa.kappa(j) / crate::stats::factorial(j)
    });
    let drift = drift_exponent.exp().scale(-1.0 / (2.0 * n_pop as f64));
    let total = tilt.add(&drift).expect("matching centers and orders");

    let mut values = alloc::vec::Vec::with_capacity(order);
    for i in 1..=order {
        values.push(total.derivative_at_center(i).expect("within series order"));
    }
    if values[1] < 0.0 {
        return Err(TheoryError::NegativeVariance {
            generation: 0,
            island: 0,
            kappa2: values[1],
        });
    }
    Ok(CumulantVector::new(values)?)
}
