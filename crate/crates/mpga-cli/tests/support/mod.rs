//! Helpers for the acceptance suite: oracles, statistics, fixture configs.

use std::path::{Path, PathBuf};

use mpga_core::stats::{hermite, sample_cumulants, CumulantVector};
use rand::Rng;

pub const GRID_POINTS: usize = 240_001;
pub const SPAN_SIGMA: f64 = 12.0;

pub fn trapezoid(lo: f64, hi: f64, n: usize, mut f: impl FnMut(f64) -> f64) -> f64 {
    let h = (hi - lo) / (n - 1) as f64;
    let mut acc = 0.5 * (f(lo) + f(hi));
    for i in 1..n - 1 {
        acc += f(lo + i as f64 * h);
    }
    acc * h
}

fn gc_parts(kappa: &CumulantVector, f: f64) -> (f64, f64) {
    let sigma = kappa.variance().sqrt();
    let x = (f - kappa.mean()) / sigma;
    let mut psi = 0.0;
    for i in 3..=kappa.order() {
        psi += kappa.gc_coefficient(i) * hermite(i as u32, x);
    }
    (x, psi)
}

fn log_density_second_order(kappa: &CumulantVector, f: f64) -> f64 {
    let (x, psi) = gc_parts(kappa, f);
    -0.5 * (2.0 * std::f64::consts::PI * kappa.variance()).ln() - 0.5 * x * x + psi
        - 0.5 * psi * psi
}

fn density(kappa: &CumulantVector, f: f64) -> f64 {
    let (x, psi) = gc_parts(kappa, f);
    (1.0 + psi) * (-0.5 * x * x).exp()
        / ((2.0 * std::f64::consts::PI * kappa.variance()).sqrt())
}

/// Quadrature of p_l (ln p_l - ln p_q) with both logs expanded to second
/// order: the integrand the closed-form divergence integrates.
pub fn kl_second_order_quadrature(kappa_l: &CumulantVector, kappa_q: &CumulantVector) -> f64 {
    let sigma = kappa_l.variance().sqrt();
    let lo = kappa_l.mean() - SPAN_SIGMA * sigma;
    let hi = kappa_l.mean() + SPAN_SIGMA * sigma;
    trapezoid(lo, hi, GRID_POINTS, |f| {
        density(kappa_l, f)
            * (log_density_second_order(kappa_l, f) - log_density_second_order(kappa_q, f))
    })
}

/// Quadrature of -p (ln N + Psi - Psi^2/2): the entropy expression's own
/// integrand.
pub fn entropy_second_order_quadrature(kappa: &CumulantVector) -> f64 {
    let sigma = kappa.variance().sqrt();
    let lo = kappa.mean() - SPAN_SIGMA * sigma;
    let hi = kappa.mean() + SPAN_SIGMA * sigma;
    trapezoid(lo, hi, GRID_POINTS, |f| {
        -density(kappa, f) * log_density_second_order(kappa, f)
    })
}

pub fn gaussian_kl_quadrature(k1: f64, k2: f64, q1: f64, q2: f64) -> f64 {
    let sigma = k2.sqrt();
    let lo = k1 - SPAN_SIGMA * sigma;
    let hi = k1 + SPAN_SIGMA * sigma;
    let log_norm = |m: f64, v: f64, f: f64| {
        -((f - m) * (f - m)) / (2.0 * v) - 0.5 * (2.0 * std::f64::consts::PI * v).ln()
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

/// Random order-4 vector with standardized coefficients bounded by `a_max`.
pub fn random_vector(rng: &mut impl Rng, a_max: f64) -> CumulantVector {
    let k1 = rng.gen_range(-1.0..1.0);
    let k2 = rng.gen_range(0.5..2.0);
    let a3 = rng.gen_range(-a_max..a_max);
    let a4 = rng.gen_range(-a_max..a_max);
    CumulantVector::new(vec![
        k1,
        k2,
        a3 * 6.0 * k2.powf(1.5),
        a4 * 24.0 * k2 * k2,
    ])
    .unwrap()
}

pub struct ResamplingOracle {
    pub k1_mean: f64,
    pub k1_se: f64,
    pub k2_mean: f64,
    pub k2_se: f64,
}

/// Boltzmann-reweighted resampling oracle: `pools` independent
/// million-sample Gaussian populations, `trials_per_pool` multinomial draws
/// of `n_pop` each, plain sample cumulants averaged per pool; mean and
/// standard error across pools capture both noise levels.
pub fn boltzmann_resampling_oracle(
    beta: f64,
    n_pop: usize,
    pools: usize,
    trials_per_pool: usize,
    seed: u64,
) -> ResamplingOracle {
    use rand_distr::StandardNormal;
    let mut pool_k1 = Vec::with_capacity(pools);
    let mut pool_k2 = Vec::with_capacity(pools);
    for p in 0..pools {
        let mut rng = mpga_core::rng::stream(seed, &[p as u64]);
        let pool: Vec<f64> = (0..1_000_000).map(|_| rng.sample(StandardNormal)).collect();
        let fmin = pool.iter().cloned().fold(f64::INFINITY, f64::min);
        let mut cumulative = Vec::with_capacity(pool.len());
        let mut acc = 0.0;
        for &f in &pool {
            acc += (-beta * (f - fmin)).exp();
            cumulative.push(acc);
        }
        let total = acc;
        let mut k1_sum = 0.0;
        let mut k2_sum = 0.0;
        let mut draws = vec![0.0; n_pop];
        for _ in 0..trials_per_pool {
            for slot in draws.iter_mut() {
                let u = rng.gen::<f64>() * total;
                let idx = cumulative.partition_point(|&c| c < u).min(pool.len() - 1);
                *slot = pool[idx];
            }
            let kappa = sample_cumulants(&draws, 2).unwrap();
            k1_sum += kappa.kappa(1);
            k2_sum += kappa.kappa(2);
        }
        pool_k1.push(k1_sum / trials_per_pool as f64);
        pool_k2.push(k2_sum / trials_per_pool as f64);
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let se = |v: &[f64]| {
        let m = mean(v);
        (v.iter().map(|x| (x - m) * (x - m)).sum::<f64>()
            / ((v.len() - 1) as f64 * v.len() as f64))
            .sqrt()
    };
    ResamplingOracle {
        k1_mean: mean(&pool_k1),
        k1_se: se(&pool_k1),
        k2_mean: mean(&pool_k2),
        k2_se: se(&pool_k2),
    }
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    let rx = ranks(xs);
    let ry = ranks(ys);
    pearson(&rx, &ry)
}

fn ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
    let mut out = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            out[idx] = rank;
        }
        i = j + 1;
    }
    out
}

fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    sxy / (sxx * syy).sqrt()
}

/// Log-linear decay fit: returns (rate, R^2) for y ~ y0 * rate^n.
pub fn fit_decay(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let xs: Vec<f64> = (0..values.len()).map(|i| i as f64).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let xm = xs.iter().sum::<f64>() / n;
    let ym = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
    let slope = sxy / sxx;
    let intercept = ym - slope * xm;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let e = y - (intercept + slope * x);
            e * e
        })
        .sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - ym) * (y - ym)).sum();
    (slope.exp(), 1.0 - ss_res / ss_tot)
}

pub fn write_ring4(path: &Path) {
    std::fs::write(path, "0 1 0 0\n0 0 1 0\n0 0 0 1\n1 0 0 0\n").unwrap();
}

pub fn repo_config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name)
}

pub fn fig2_simulate_json(replications: usize, generations: usize) -> String {
    format!(
        r#"{{
  "islands": 4, "population": 100, "generations": {generations},
  "migration_period": 20, "migration_rate": 0.2,
  "crossover_rate": 0.0, "mutation_rate": 0.0,
  "beta": 0.005, "cumulant_order": 4,
  "topology": "ring4.txt",
  "problem": {{"paramagnet": {{"length": 20}}}},
  "seed": 42, "replications": {replications}
}}"#
    )
}

pub fn fig4_ising_json() -> String {
    r#"{
  "lattice": 8, "islands": 4, "population": 20,
  "generations": 100, "therm_cutoff": 50,
  "migration_period": 2, "migration_rate": 0.2, "crossover_rate": 0.6,
  "topology": "ring4.txt",
  "temperatures": {"start": 1.0, "stop": 3.9, "step": 0.1},
  "seed": 7, "experiments": 20,
  "budgets": [60, 80, 100],
  "reference": {"therm_sweeps": 20000, "measure_sweeps": 100000}
}"#
    .to_string()
}
