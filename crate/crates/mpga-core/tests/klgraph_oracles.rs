mod common;

use approx::assert_relative_eq;
use common::{
    entropy_quadrature, entropy_second_order_quadrature, gaussian_kl_quadrature, kl_quadrature,
    kl_second_order_quadrature,
};
use mpga_core::klgraph::{
    entropy_gc, gaussian_kl, kl_correction, kl_total, kl_truncation_terms, scaled_hermite,
    StandardizedPair,
};
use mpga_core::stats::CumulantVector;
use proptest::prelude::*;

fn cv(values: &[f64]) -> CumulantVector {
    CumulantVector::new(values.to_vec()).unwrap()
}

/// Vector with prescribed standardized coefficients a3, a4.
fn from_coefficients(k1: f64, k2: f64, a3: f64, a4: f64) -> CumulantVector {
    cv(&[k1, k2, a3 * 6.0 * k2.powf(1.5), a4 * 24.0 * k2 * k2])
}

#[test]
fn gaussian_kl_matches_quadrature() {
    for &(k1, k2, q1, q2) in &[
        (0.0, 1.0, 0.0, 2.0),
        (1.0, 0.5, -1.0, 3.0),
        (-2.0, 4.0, 0.0, 0.25),
    ] {
        assert_relative_eq!(
            gaussian_kl(k1, k2, q1, q2).unwrap(),
            gaussian_kl_quadrature(k1, k2, q1, q2),
            epsilon = 1e-10
        );
    }
}

#[test]
fn entropy_example_against_true_quadrature() {
    // kappa = (0, 1, 0.1, 0.05): the second-order value tracks the true
    // entropy within 1e-4; the log-truncation third-order terms overshoot the
    // true cubic correction, so the pinned bound applies to second order
    let kappa = cv(&[0.0, 1.0, 0.1, 0.05]);
    let terms = entropy_gc(&kappa).unwrap();
    let quad = entropy_quadrature(&kappa);
    assert!(
        (terms.second_order() - quad).abs() < 1e-4,
        "second order {} vs true {quad}",
        terms.second_order()
    );
    // and the full expression integrates its own truncated integrand exactly
    assert_relative_eq!(
        terms.total(),
        entropy_second_order_quadrature(&kappa),
        epsilon = 1e-9
    );
}

#[test]
fn entropy_terms_are_separately_retrievable() {
    let kappa = cv(&[0.0, 2.0, 0.4, -0.3]);
    let terms = entropy_gc(&kappa).unwrap();
    let k2: f64 = 2.0;
    assert_relative_eq!(
        terms.gaussian,
        0.5 * (2.0 * std::f64::consts::PI * std::f64::consts::E * k2).ln(),
        epsilon = 1e-14
    );
    assert_relative_eq!(terms.skew, -0.16 / (12.0 * k2.powi(3)), epsilon = 1e-14);
    assert_relative_eq!(terms.kurtosis, -0.09 / (48.0 * k2.powi(4)), epsilon = 1e-14);
    assert_relative_eq!(
        terms.third_order,
        (-0.3f64).powi(3) / (16.0 * k2.powi(6)) + 3.0 * 0.16 * -0.3 / (8.0 * k2.powi(5)),
        epsilon = 1e-14
    );
    assert_relative_eq!(
        terms.total(),
        terms.second_order() + terms.third_order,
        epsilon = 1e-14
    );
}

#[test]
fn correction_skewed_vs_wide_gaussian() {
    // kappa_l = (0,1,0.1,0), kappa_q = (0,2,0,0): correction equals the
    // true-KL quadrature minus the Gaussian part within 1e-4
    let l = cv(&[0.0, 1.0, 0.1, 0.0]);
    let q = cv(&[0.0, 2.0, 0.0, 0.0]);
    let corr = kl_correction(&l, &q).unwrap();
    let oracle = kl_quadrature(&l, &q) - gaussian_kl(0.0, 1.0, 0.0, 2.0).unwrap();
    assert!(
        (corr - oracle).abs() < 1e-4,
        "correction {corr} vs quadrature {oracle}"
    );
    // only the entropy branch is active here (island q is Gaussian)
    assert_relative_eq!(corr, 0.01 / 12.0, epsilon = 1e-14);
}

#[test]
fn correction_gaussian_vs_kurtotic_decomposition() {
    // kappa_l Gaussian, kappa_q = (0,2,0,0.1): the single Hermite sum
    // dominates; the only other surviving term is the island-q double sum,
    // bounded by term-by-term quadrature at ~4e-6 here
    let l = cv(&[0.0, 1.0, 0.0, 0.0]);
    let q = cv(&[0.0, 2.0, 0.0, 0.1]);
    let corr = kl_correction(&l, &q).unwrap();
    assert!(corr.is_finite());

    let pair = StandardizedPair::new(&l, &q).unwrap();
    let a4q = q.gc_coefficient(4);
    let single_branch = -a4q * scaled_hermite(4, pair.mu, pair.s);
    let residual = corr - single_branch;
    assert!(
        residual.abs() < 5e-6,
        "single-branch residual {residual} should be the small double sum"
    );
    // quadrature pins the full correction, so the residual is real, not noise
    let oracle = kl_quadrature(&l, &q) - gaussian_kl(0.0, 1.0, 0.0, 2.0).unwrap();
    assert!((corr - oracle).abs() < 1e-5, "corr {corr} vs {oracle}");
}

#[test]
fn total_with_truncation_terms_integrates_second_order_integrand() {
    // closed-form identity: kl_total + kl_truncation_terms equals the
    // quadrature of the second-order divergence integrand to quadrature
    // precision, for any coefficients
    let cases = [
        (cv(&[0.0, 1.0, 0.25, -0.4]), cv(&[0.7, 1.8, -0.5, 0.9])),
        (cv(&[-1.0, 0.6, 0.1, 0.2]), cv(&[-0.8, 0.6, -0.15, 0.1])),
        (cv(&[2.0, 3.0, 1.0, -2.0]), cv(&[1.0, 1.2, 0.3, 0.5])),
        (cv(&[0.0, 1.0, 0.0, 0.0]), cv(&[0.3, 1.0, 0.2, -0.1])),
    ];
    for (l, q) in cases {
        let closed = kl_total(&l, &q).unwrap() + kl_truncation_terms(&l, &q).unwrap();
        let quad = kl_second_order_quadrature(&l, &q);
        assert!(
            (closed - quad).abs() < 1e-8,
            "closed {closed} vs quadrature {quad}"
        );
    }
}

#[test]
fn total_tracks_true_kl_in_the_convergent_regime() {
    // the expansion's Hermite coefficients grow combinatorially, so the
    // second-order formula follows the true divergence within 1e-3 only for
    // standardized coefficients up to ~0.01
    let mut worst: f64 = 0.0;
    for (i, j) in [(1, 2), (3, 5), (2, 7), (4, 1), (6, 3)] {
        let l = from_coefficients(0.1 * i as f64, 1.0, 0.0015 * i as f64, -0.001 * j as f64);
        let q = from_coefficients(0.1 * j as f64, 1.3, -0.0008 * j as f64, 0.0015 * i as f64);
        let diff = (kl_total(&l, &q).unwrap() - kl_quadrature(&l, &q)).abs();
        worst = worst.max(diff);
    }
    assert!(worst < 1e-3, "worst deviation {worst}");
}

#[test]
fn histogram_estimator_cross_checks_cumulant_path() {
    // two separated Gaussian samples: the histogram estimate and the
    // cumulant-based divergence agree to the estimators' accuracy
    use mpga_core::klgraph::histogram_kl;
    use mpga_core::stats::sample_cumulants;
    use rand::SeedableRng;
    use rand_distr::{Distribution, Normal};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
    let na = Normal::new(0.0, 1.0).unwrap();
    let nb = Normal::new(0.8, 1.1).unwrap();
    let a: Vec<f64> = (0..200_000).map(|_| na.sample(&mut rng)).collect();
    let b: Vec<f64> = (0..200_000).map(|_| nb.sample(&mut rng)).collect();
    let hist = histogram_kl(&a, &b, 60);
    let cum = kl_total(
        &sample_cumulants(&a, 4).unwrap(),
        &sample_cumulants(&b, 4).unwrap(),
    )
    .unwrap();
    let exact = gaussian_kl(0.0, 1.0, 0.8, 1.1 * 1.1).unwrap();
    assert!((cum - exact).abs() < 0.01, "cumulant {cum} vs exact {exact}");
    assert!((hist - exact).abs() < 0.05, "histogram {hist} vs exact {exact}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn self_divergence_zero_and_gaussian_nonnegative(
        k1 in -3.0..3.0f64,
        k2 in 0.05..5.0f64,
        a3 in -0.1..0.1f64,
        a4 in -0.1..0.1f64,
        q1 in -3.0..3.0f64,
        q2 in 0.05..5.0f64,
    ) {
        let kappa = from_coefficients(k1, k2, a3, a4);
        prop_assert_eq!(kl_total(&kappa, &kappa).unwrap(), 0.0);
        let g = gaussian_kl(k1, k2, q1, q2).unwrap();
        prop_assert!(g >= 0.0);
    }

    #[test]
    fn translation_leaves_divergence_unchanged(
        k1 in -2.0..2.0f64,
        q1 in -2.0..2.0f64,
        shift in -50.0..50.0f64,
        a3l in -0.05..0.05f64,
        a4q in -0.05..0.05f64,
    ) {
        let l = from_coefficients(k1, 1.4, a3l, 0.02);
        let q = from_coefficients(q1, 0.9, -0.01, a4q);
        let ls = from_coefficients(k1 + shift, 1.4, a3l, 0.02);
        let qs = from_coefficients(q1 + shift, 0.9, -0.01, a4q);
        let base = kl_total(&l, &q).unwrap();
        let shifted = kl_total(&ls, &qs).unwrap();
        prop_assert!((base - shifted).abs() < 1e-10 * base.abs().max(1.0));
    }
}
