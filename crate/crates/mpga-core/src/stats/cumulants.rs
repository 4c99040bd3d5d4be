use alloc::vec;
use alloc::vec::Vec;

use super::{binomial, factorial, StatsError};

/// Default cumulant order carried per run.
pub const DEFAULT_ORDER: usize = 4;

/// Ordered cumulants kappa_1..kappa_K of a fitness distribution.
///
/// kappa_2 >= 0 is enforced at construction; any computation that implies a
/// negative variance must surface an error instead of clamping.
#[derive(Debug, Clone, PartialEq)]
pub struct CumulantVector {
    values: Vec<f64>,
}

impl CumulantVector {
    pub fn new(values: Vec<f64>) -> Result<Self, StatsError> {
        if values.len() < 2 {
            return Err(StatsError::OrderTooSmall { order: values.len() });
        }
        if values[1] < 0.0 {
            return Err(StatsError::NegativeVariance { kappa2: values[1] });
        }
        Ok(Self { values })
    }

    /// Gaussian with the given mean and variance, padded with zeros to `order`.
    pub fn gaussian(mean: f64, variance: f64, order: usize) -> Result<Self, StatsError> {
        let mut values = vec![0.0; order.max(2)];
        values[0] = mean;
        values[1] = variance;
        Self::new(values)
    }

    pub fn order(&self) -> usize {
        self.values.len()
    }

    /// kappa_i, 1-based; zero beyond the stored order (truncation closure).
    pub fn kappa(&self, i: usize) -> f64 {
        if i == 0 {
            0.0
        } else {
            self.values.get(i - 1).copied().unwrap_or(0.0)
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mean(&self) -> f64 {
        self.values[0]
    }

    pub fn variance(&self) -> f64 {
        self.values[1]
    }

    /// Truncate or zero-extend to `order`.
    pub fn resized(&self, order: usize) -> Result<Self, StatsError> {
        let mut values = self.values.clone();
        values.resize(order.max(2), 0.0);
        Self::new(values)
    }

    /// Gram-Charlier coefficient a_i = kappa_i / (i! kappa_2^{i/2}).
    pub fn gc_coefficient(&self, i: usize) -> f64 {
        let k2 = self.variance();
        self.kappa(i) / (factorial(i) * libm::pow(k2, i as f64 / 2.0))
    }
}

/// Ordered raw moments mu_1..mu_K.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentVector {
    values: Vec<f64>,
}

impl MomentVector {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn order(&self) -> usize {
        self.values.len()
    }

    /// mu_i, 1-based; mu_0 = 1.
    pub fn mu(&self, i: usize) -> f64 {
        if i == 0 {
            1.0
        } else {
            self.values[i - 1]
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Raw moments from cumulants through the stored order, via the recursion
/// mu_n = sum_{k=0}^{n-1} C(n-1,k) kappa_{k+1} mu_{n-1-k}.
pub fn moments_from_cumulants(kappa: &CumulantVector) -> MomentVector {
    let order = kappa.order();
    let mut mu = vec![0.0; order + 1];
    mu[0] = 1.0;
    for n in 1..=order {
        let mut acc = 0.0;
        for k in 0..n {
            acc += binomial(n - 1, k) * kappa.kappa(k + 1) * mu[n - 1 - k];
        }
        mu[n] = acc;
    }
    MomentVector::new(mu[1..].to_vec())
}

/// Exact inverse of [`moments_from_cumulants`] through the stored order.
///
/// Fails if the implied kappa_2 is negative.
pub fn cumulants_from_moments(mu: &MomentVector) -> Result<CumulantVector, StatsError> {
    let order = mu.order();
    let mut kappa = vec![0.0; order];
    for n in 1..=order {
        let mut acc = mu.mu(n);
        for k in 1..n {
            acc -= binomial(n - 1, k - 1) * kappa[k - 1] * mu.mu(n - k);
        }
        kappa[n - 1] = acc;
    }
    CumulantVector::new(kappa)
}

/// Plain (biased) sample cumulants of `values` through `order`.
///
/// Raw sample moments of the mean-shifted data are converted through
/// [`cumulants_from_moments`]; the shift keeps the conversion numerically
/// stable and only moves kappa_1. The estimator is the plain one, not
/// k-statistics.
pub fn sample_cumulants(values: &[f64], order: usize) -> Result<CumulantVector, StatsError> {
    if values.len() < 2 {
        return Err(StatsError::TooFewSamples { len: values.len() });
    }
    if order < 2 {
        return Err(StatsError::OrderTooSmall { order });
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let mut central = vec![0.0; order];
    for &v in values {
        let d = v - mean;
        let mut p = 1.0;
        for m in central.iter_mut() {
            p *= d;
            *m += p;
        }
    }
    for m in central.iter_mut() {
        *m /= n;
    }
    let mut kappa = cumulants_from_moments(&MomentVector::new(central))?;
    kappa.values[0] += mean;
    Ok(kappa)
}
