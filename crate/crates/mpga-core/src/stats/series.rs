use alloc::vec;
use alloc::vec::Vec;

use super::{factorial, StatsError};

/// Truncated power series (jet): Taylor coefficients c_0..c_M about a center.
///
/// Arithmetic is coefficient-exact through the truncation order; coefficients
/// beyond it are discarded, never folded into lower orders. Used to evaluate
/// the u -> -beta derivative limits of the selection update.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    center: f64,
    coeffs: Vec<f64>,
}

impl TruncatedSeries {
    pub fn new(center: f64, coeffs: Vec<f64>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least c_0");
        Self { center, coeffs }
    }

    pub fn zero(center: f64, order: usize) -> Self {
        Self::new(center, vec![0.0; order + 1])
    }

    /// Expansion of the polynomial sum_j coeff(j) u^j (j = 1..=degree) about
    /// `center`, truncated at `order`: u^j re-expanded binomially in
    /// (u - center).
    pub fn from_polynomial<F>(center: f64, degree: usize, order: usize, coeff: F) -> Self
    where
        F: Fn(usize) -> f64,
    {
        let mut c = vec![0.0; order + 1];
        for j in 1..=degree {
            let cj = coeff(j);
            if cj == 0.0 {
                continue;
            }
            // (center + eps)^j = sum_m C(j,m) center^{j-m} eps^m
            let mut binom = 1.0;
            for (m, slot) in c.iter_mut().enumerate().take(j.min(order) + 1) {
                *slot += cj * binom * libm::pow(center, (j - m) as f64);
                binom = binom * (j - m) as f64 / (m + 1) as f64;
            }
        }
        Self::new(center, c)
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    fn check_compatible(&self, other: &Self) -> Result<(), StatsError> {
        if self.center != other.center {
            return Err(StatsError::CenterMismatch {
                left: self.center,
                right: other.center,
            });
        }
        if self.order() != other.order() {
            return Err(StatsError::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, StatsError> {
        self.check_compatible(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self::new(self.center, coeffs))
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::new(self.center, self.coeffs.iter().map(|c| c * factor).collect())
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Self) -> Result<Self, StatsError> {
        self.check_compatible(other)?;
        let m = self.order();
        let mut c = vec![0.0; m + 1];
        for i in 0..=m {
            if self.coeffs[i] == 0.0 {
                continue;
            }
            for j in 0..=m - i {
                c[i + j] += self.coeffs[i] * other.coeffs[j];
            }
        }
        Ok(Self::new(self.center, c))
    }

    /// exp of the series: e_0 = exp(c_0), n e_n = sum_{k=1}^n k c_k e_{n-k}.
    pub fn exp(&self) -> Self {
        let m = self.order();
        let mut e = vec![0.0; m + 1];
        e[0] = libm::exp(self.coeffs[0]);
        for n in 1..=m {
            let mut acc = 0.0;
            for k in 1..=n {
                acc += k as f64 * self.coeffs[k] * e[n - k];
            }
            e[n] = acc / n as f64;
        }
        Self::new(self.center, e)
    }

    /// i-th derivative evaluated at the center: i! c_i.
    pub fn derivative_at_center(&self, i: usize) -> Result<f64, StatsError> {
        if i > self.order() {
            return Err(StatsError::DerivativeOrder {
                wanted: i,
                order: self.order(),
            });
        }
        Ok(factorial(i) * self.coeffs[i])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exp_of_zero_is_one() {
        let e = TruncatedSeries::zero(0.3, 5).exp();
        assert_eq!(e.coeffs()[0], 1.0);
        assert!(e.coeffs()[1..].iter().all(|&c| c == 0.0));
    }

    #[test]
    fn derivative_of_u_squared() {
        // u^2 about 0: c = [0, 0, 1]; second derivative = 2
        let s = TruncatedSeries::from_polynomial(0.0, 2, 4, |j| if j == 2 { 1.0 } else { 0.0 });
        assert_eq!(s.derivative_at_center(2).unwrap(), 2.0);
        assert_eq!(s.derivative_at_center(1).unwrap(), 0.0);
    }

    #[test]
    fn polynomial_recentering() {
        // u^3 about center 2: coefficients C(3,m) 2^{3-m}
        let s = TruncatedSeries::from_polynomial(2.0, 3, 3, |j| if j == 3 { 1.0 } else { 0.0 });
        assert_eq!(s.coeffs(), &[8.0, 12.0, 6.0, 1.0]);
    }

    #[test]
    fn derivative_past_order_errors() {
        let s = TruncatedSeries::zero(0.0, 3);
        assert!(s.derivative_at_center(4).is_err());
    }

    #[test]
    fn center_mismatch_errors() {
        let a = TruncatedSeries::zero(0.0, 3);
        let b = TruncatedSeries::zero(1.0, 3);
        assert!(a.add(&b).is_err());
    }

    #[test]
    fn exp_matches_scalar_for_constant() {
        let s = TruncatedSeries::new(0.0, vec![0.7, 0.0, 0.0]);
        assert_relative_eq!(s.exp().coeffs()[0], libm::exp(0.7), epsilon = 1e-15);
    }
}
