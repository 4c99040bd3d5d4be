#![allow(dead_code)] // shared across test binaries, each uses a subset

//! Quadrature oracles shared by the integration tests. All integrals use a
//! fine trapezoid rule over +-12 standard deviations around island l, the
//! documented reference for the derived density values.

use mpga_core::stats::{gram_charlier_pdf, hermite, CumulantVector};

pub const GRID_POINTS: usize = 240_001;
pub const SPAN_SIGMA: f64 = 12.0;

/// Trapezoid integral of `f` over [lo, hi].
pub fn trapezoid(lo: f64, hi: f64, n: usize, mut f: impl FnMut(f64) -> f64) -> f64 {
    let h = (hi - lo) / (n - 1) as f64;
    let mut acc = 0.5 * (f(lo) + f(hi));
    for i in 1..n - 1 {
        acc += f(lo + i as f64 * h);
    }
    acc * h
}

fn span(kappa: &CumulantVector) -> (f64, f64) {
    let sigma = kappa.variance().sqrt();
    (
        kappa.mean() - SPAN_SIGMA * sigma,
        kappa.mean() + SPAN_SIGMA * sigma,
    )
}

/// Integral of the Gram-Charlier density (normalization check).
pub fn pdf_mass(kappa: &CumulantVector) -> f64 {
    let (lo, hi) = span(kappa);
    trapezoid(lo, hi, GRID_POINTS, |f| gram_charlier_pdf(kappa, f).unwrap())
}

/// True differential entropy -int p ln p over the region where p > 0.
pub fn entropy_quadrature(kappa: &CumulantVector) -> f64 {
    let (lo, hi) = span(kappa);
    trapezoid(lo, hi, GRID_POINTS, |f| {
        let p = gram_charlier_pdf(kappa, f).unwrap();
        if p > 1e-300 {
            -p * p.ln()
        } else {
            0.0
        }
    })
}

/// Standardized coordinate, correction series and log-density pieces.
fn gc_parts(kappa: &CumulantVector, f: f64) -> (f64, f64) {
    let sigma = kappa.variance().sqrt();
    let x = (f - kappa.mean()) / sigma;
    let mut psi = 0.0;
    for i in 3..=kappa.order() {
        psi += kappa.gc_coefficient(i) * hermite(i as u32, x);
    }
    (x, psi)
}

/// Second-order truncated log density: ln N - ln sigma + Psi - Psi^2/2.
fn log_density_second_order(kappa: &CumulantVector, f: f64) -> f64 {
    let (x, psi) = gc_parts(kappa, f);
    -0.5 * (2.0 * core::f64::consts::PI * kappa.variance()).ln() - 0.5 * x * x + psi
        - 0.5 * psi * psi
}

/// Quadrature of the second-order entropy integrand
/// -int p (ln N(x)/sigma + Psi - Psi^2/2): the integrand the closed-form
/// entropy expression integrates exactly.
pub fn entropy_second_order_quadrature(kappa: &CumulantVector) -> f64 {
    let (lo, hi) = span(kappa);
    trapezoid(lo, hi, GRID_POINTS, |f| {
        let p = gram_charlier_pdf(kappa, f).unwrap();
        -p * log_density_second_order(kappa, f)
    })
}

/// True KL quadrature int p_l ln(p_l / p_q) over the region where both
/// densities are positive.
pub fn kl_quadrature(kappa_l: &CumulantVector, kappa_q: &CumulantVector) -> f64 {
    let (lo, hi) = span(kappa_l);
    trapezoid(lo, hi, GRID_POINTS, |f| {
        let pl = gram_charlier_pdf(kappa_l, f).unwrap();
        let pq = gram_charlier_pdf(kappa_q, f).unwrap();
        if pl > 1e-300 && pq > 1e-300 {
            pl * (pl / pq).ln()
        } else {
            0.0
        }
    })
}

/// Quadrature of the second-order divergence integrand
/// p_l [ln p_l - ln p_q] with both logs expanded to second order; the
/// closed-form total plus its truncation terms integrates this exactly.
pub fn kl_second_order_quadrature(kappa_l: &CumulantVector, kappa_q: &CumulantVector) -> f64 {
    let (lo, hi) = span(kappa_l);
    trapezoid(lo, hi, GRID_POINTS, |f| {
        let pl = gram_charlier_pdf(kappa_l, f).unwrap();
        pl * (log_density_second_order(kappa_l, f) - log_density_second_order(kappa_q, f))
    })
}

/// Gaussian KL by quadrature (independent of the closed form). Log densities
/// are evaluated analytically so narrow-q tails cannot underflow.
pub fn gaussian_kl_quadrature(k1: f64, k2: f64, q1: f64, q2: f64) -> f64 {
    let sigma = k2.sqrt();
    let lo = k1 - SPAN_SIGMA * sigma;
    let hi = k1 + SPAN_SIGMA * sigma;
    let log_norm = |m: f64, v: f64, f: f64| {
        -((f - m) * (f - m)) / (2.0 * v) - 0.5 * (2.0 * core::f64::consts::PI * v).ln()
    };
    trapezoid(lo, hi, GRID_POINTS, |f| {
        let log_pl = log_norm(k1, k2, f);
        if log_pl > -690.0 {
            log_pl.exp() * (log_pl - log_norm(q1, q2, f))
        } else {
            0.0
        }
    })
}
