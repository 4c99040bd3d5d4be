use super::KlError;
use crate::stats::CumulantVector;

/// Below this distance from q2/k2 = 1 the variance ratio is snapped to one;
/// the scaled-Hermite products are polynomial in (mu, s) so the limit is just
/// mu = 0.
const EQUAL_VARIANCE_EPS: f64 = 1e-9;

/// KL divergence between two Gaussians N(k1, k2) and N(q1, q2):
/// ln(q2/k2)/2 + (k2 + (k1-q1)^2)/(2 q2) - 1/2.
pub fn gaussian_kl(k1: f64, k2: f64, q1: f64, q2: f64) -> Result<f64, KlError> {
    if k2 <= 0.0 {
        return Err(KlError::NonPositiveVariance { kappa2: k2 });
    }
    if q2 <= 0.0 {
        return Err(KlError::NonPositiveVariance { kappa2: q2 });
    }
    Ok(0.5 * libm::log(q2 / k2) + (k2 + (k1 - q1) * (k1 - q1)) / (2.0 * q2) - 0.5)
}

/// Entropy of a Gram-Charlier distribution, term by term:
/// Gaussian part, the two second-order corrections, and the third-order terms
/// produced by the log truncation. The divergence keeps only the second-order
/// part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyTerms {
    pub gaussian: f64,
    pub skew: f64,
    pub kurtosis: f64,
    pub third_order: f64,
}

impl EntropyTerms {
    pub fn total(&self) -> f64 {
        self.gaussian + self.skew + self.kurtosis + self.third_order
    }

    pub fn second_order(&self) -> f64 {
        self.gaussian + self.skew + self.kurtosis
    }
}

/// S = ln(2 pi e k2)/2 - k3^2/(12 k2^3) - k4^2/(48 k2^4)
///     + k4^3/(16 k2^6) + 3 k3^2 k4/(8 k2^5).
pub fn entropy_gc(kappa: &CumulantVector) -> Result<EntropyTerms, KlError> {
    let k2 = kappa.variance();
    if k2 <= 0.0 {
        return Err(KlError::NonPositiveVariance { kappa2: k2 });
    }
    let k3 = kappa.kappa(3);
    let k4 = kappa.kappa(4);
    Ok(EntropyTerms {
        gaussian: 0.5 * libm::log(2.0 * core::f64::consts::PI * core::f64::consts::E * k2),
        skew: -k3 * k3 / (12.0 * libm::pow(k2, 3.0)),
        kurtosis: -k4 * k4 / (48.0 * libm::pow(k2, 4.0)),
        third_order: k4 * k4 * k4 / (16.0 * libm::pow(k2, 6.0))
            + 3.0 * k3 * k3 * k4 / (8.0 * libm::pow(k2, 5.0)),
    })
}

/// Standardized description of island q relative to island l:
/// q1_tilde = (q1 - k1)/sqrt(k2), q2_tilde = q2/k2, mu = 1 - 1/q2_tilde and
/// s = sqrt(mu) m_q = -q1_tilde/sqrt(q2_tilde).
///
/// Every occurrence of m_q in the correction appears as mu^{n/2} He_n(m_q),
/// which [`scaled_hermite`] evaluates as a polynomial in (mu, s); the product
/// stays real and finite through the q2_tilde = 1 singularity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StandardizedPair {
    pub q1_tilde: f64,
    pub q2_tilde: f64,
    pub mu: f64,
    pub s: f64,
}

impl StandardizedPair {
    pub fn new(kappa_l: &CumulantVector, kappa_q: &CumulantVector) -> Result<Self, KlError> {
        let k2 = kappa_l.variance();
        let q2 = kappa_q.variance();
        if k2 <= 0.0 {
            return Err(KlError::NonPositiveVariance { kappa2: k2 });
        }
        if q2 <= 0.0 {
            return Err(KlError::NonPositiveVariance { kappa2: q2 });
        }
        let q1_tilde = (kappa_q.mean() - kappa_l.mean()) / libm::sqrt(k2);
        let q2_tilde = q2 / k2;
        let mu = if (q2_tilde - 1.0).abs() < EQUAL_VARIANCE_EPS {
            0.0
        } else {
            1.0 - 1.0 / q2_tilde
        };
        let s = -q1_tilde / libm::sqrt(q2_tilde);
        Ok(Self {
            q1_tilde,
            q2_tilde,
            mu,
            s,
        })
    }
}

/// mu^{n/2} He_n(m) with s = sqrt(mu) m, as the polynomial
/// sum_j (-1)^j n!/(j! 2^j (n-2j)!) mu^j s^{n-2j}.
pub fn scaled_hermite(n: usize, mu: f64, s: f64) -> f64 {
    let mut total = 0.0;
    let mut sign = 1.0;
    for j in 0..=n / 2 {
        let coeff = crate::stats::factorial(n)
            / (crate::stats::factorial(j)
                * libm::pow(2.0, j as f64)
                * crate::stats::factorial(n - 2 * j));
        total += sign * coeff * libm::pow(mu, j as f64) * powi(s, n - 2 * j);
        sign = -sign;
    }
    total
}

fn powi(x: f64, n: usize) -> f64 {
    let mut acc = 1.0;
    for _ in 0..n {
        acc *= x;
    }
    acc
}

/// Integral of N(x) He_i(x) He_m(y(x)) dx: zero for m < i, otherwise
/// m!/(m-i)! q2_tilde^{-i/2} times the scaled Hermite of order m - i.
fn cross_integral(i: usize, m: usize, pair: &StandardizedPair) -> f64 {
    if m < i {
        return 0.0;
    }
    let ratio = crate::stats::factorial(m) / crate::stats::factorial(m - i);
    ratio * libm::pow(pair.q2_tilde, -(i as f64) / 2.0) * scaled_hermite(m - i, pair.mu, pair.s)
}

/// Second-order correction to the Gaussian divergence between islands l and q.
///
/// Four pieces, all derived from the Hermite integral identities:
///  - the entropy correction of island l,
///  - the single sum -sum_j a_j^(q) mu^{j/2} He_j(m_q),
///  - the mixed k3 q3 / k4 q4 term (the cross integrals He_i(x) He_j(y)),
///  - the double Hermite sum over island-q coefficients.
///
/// The correction vanishes identically when the islands coincide and can be
/// negative for dissimilar islands (expansion artifact); callers keep the
/// signed value.
pub fn kl_correction(
    kappa_l: &CumulantVector,
    kappa_q: &CumulantVector,
) -> Result<f64, KlError> {
    let pair = StandardizedPair::new(kappa_l, kappa_q)?;
    if kappa_l == kappa_q {
        // the four pieces cancel analytically; return the identity exactly
        return Ok(0.0);
    }
    let al = [kappa_l.gc_coefficient(3), kappa_l.gc_coefficient(4)];
    let aq = [kappa_q.gc_coefficient(3), kappa_q.gc_coefficient(4)];

    let entropy = {
        let t = entropy_gc(kappa_l)?;
        -(t.skew + t.kurtosis)
    };

    let mut single = 0.0;
    for (idx, &a) in aq.iter().enumerate() {
        single -= a * scaled_hermite(idx + 3, pair.mu, pair.s);
    }

    let mut mixed = 0.0;
    for (li, &a_l) in al.iter().enumerate() {
        for (qi, &a_q) in aq.iter().enumerate() {
            mixed -= a_l * a_q * cross_integral(li + 3, qi + 3, &pair);
        }
    }

    let mut double = 0.0;
    for (ii, &a_i) in aq.iter().enumerate() {
        for (ji, &a_j) in aq.iter().enumerate() {
            let (i, j) = (ii + 3, ji + 3);
            let mut inner = 0.0;
            for k in 0..=i.min(j) {
                inner += crate::stats::factorial(k)
                    * crate::stats::binomial(i, k)
                    * crate::stats::binomial(j, k)
                    * scaled_hermite(i + j - 2 * k, pair.mu, pair.s);
            }
            double += 0.5 * a_i * a_j * inner;
        }
    }

    Ok(entropy + single + mixed + double)
}

/// Gaussian divergence plus the second-order correction.
pub fn kl_total(kappa_l: &CumulantVector, kappa_q: &CumulantVector) -> Result<f64, KlError> {
    Ok(gaussian_kl(
        kappa_l.mean(),
        kappa_l.variance(),
        kappa_q.mean(),
        kappa_q.variance(),
    )? + kl_correction(kappa_l, kappa_q)?)
}

/// The third-order content of the second-order log expansion that
/// [`kl_total`] drops: minus the third-order entropy terms of island l plus
/// the closed form of (1/2) Int N(x) Psi(x) Phi(y)^2 dx.
///
/// Adding this to `kl_total` gives the exact integral of the second-order
/// divergence integrand, which is what the quadrature oracle integrates.
pub fn kl_truncation_terms(
    kappa_l: &CumulantVector,
    kappa_q: &CumulantVector,
) -> Result<f64, KlError> {
    let pair = StandardizedPair::new(kappa_l, kappa_q)?;
    let al = [kappa_l.gc_coefficient(3), kappa_l.gc_coefficient(4)];
    let aq = [kappa_q.gc_coefficient(3), kappa_q.gc_coefficient(4)];
    let entropy_third = entropy_gc(kappa_l)?.third_order;

    // Phi(y)^2 linearized in Hermite polynomials of y, then integrated against
    // He_i(x) via the cross integrals.
    let mut psi_phi2 = 0.0;
    for (li, &a_l) in al.iter().enumerate() {
        let i = li + 3;
        for (ji, &a_j) in aq.iter().enumerate() {
            for (ki, &a_k) in aq.iter().enumerate() {
                let (j, k) = (ji + 3, ki + 3);
                for t in 0..=j.min(k) {
                    let linearize = crate::stats::factorial(t)
                        * crate::stats::binomial(j, t)
                        * crate::stats::binomial(k, t);
                    psi_phi2 +=
                        0.5 * a_l * a_j * a_k * linearize * cross_integral(i, j + k - 2 * t, &pair);
                }
            }
        }
    }
    Ok(-entropy_third + psi_phi2)
}

/// Histogram estimate of KL(samples_l || samples_q) over a shared binning;
/// a secondary estimator for cross-checking the cumulant path. Bins where
/// either histogram is empty are skipped.
pub fn histogram_kl(samples_l: &[f64], samples_q: &[f64], bins: usize) -> f64 {
    assert!(bins >= 2 && !samples_l.is_empty() && !samples_q.is_empty());
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in samples_l.iter().chain(samples_q) {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if hi <= lo {
        return 0.0;
    }
    let width = (hi - lo) / bins as f64;
    let mut hl = alloc::vec![0.0f64; bins];
    let mut hq = alloc::vec![0.0f64; bins];
    let index = |v: f64| (((v - lo) / width) as usize).min(bins - 1);
    for &v in samples_l {
        hl[index(v)] += 1.0;
    }
    for &v in samples_q {
        hq[index(v)] += 1.0;
    }
    let nl = samples_l.len() as f64;
    let nq = samples_q.len() as f64;
    let mut kl = 0.0;
    for b in 0..bins {
        if hl[b] > 0.0 && hq[b] > 0.0 {
            let p = hl[b] / nl;
            let q = hq[b] / nq;
            kl += p * libm::log(p / q);
        }
    }
    kl
}
