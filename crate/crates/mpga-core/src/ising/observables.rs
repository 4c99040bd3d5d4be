use alloc::vec::Vec;

use super::IsingError;

/// Thermodynamic estimates at one temperature. Energies are per spin; the
/// two magnetization conventions are carried side by side:
/// `m_mean` is the absolute value of each individual's time-averaged
/// magnetization, averaged over individuals; `m_abs_mean` is the per-sample
/// |M|/N^2 average that also enters chi.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thermo {
    pub t: f64,
    pub e_mean: f64,
    pub e_stderr: f64,
    pub c_h: f64,
    pub c_h_stderr: f64,
    pub m_mean: f64,
    pub m_stderr: f64,
    pub m_abs_mean: f64,
    pub m_abs_stderr: f64,
    pub chi: f64,
    pub chi_stderr: f64,
}

/// Streaming accumulator over measurement-phase samples.
///
/// One sample is one individual's (E, M) at the end of one measurement
/// generation. Fluctuation-dissipation estimates:
/// C_H = (<E^2> - <E>^2) / (N^2 T^2) and chi = N^2 (<m^2> - <m>^2) / T with
/// m = |M|/N^2 per sample. Standard errors come from batch means over
/// generations.
#[derive(Debug, Clone)]
pub struct ObservableAccumulator {
    n_spins: f64,
    batch_target: usize,
    // global sums
    count: u64,
    e_sum: f64,
    e2_sum: f64,
    m_abs_sum: f64,
    m2_sum: f64,
    // per-individual signed time averages (Eq.-7 convention)
    individual_m_sum: Vec<f64>,
    individual_samples: Vec<u64>,
    // batching over generations
    generations_in_batch: usize,
    batch: BatchSums,
    finished: Vec<BatchSums>,
}

#[derive(Debug, Clone, Copy, Default)]
struct BatchSums {
    count: u64,
    e_sum: f64,
    e2_sum: f64,
    m_abs_sum: f64,
    m2_sum: f64,
}

impl BatchSums {
    fn push(&mut self, e: f64, m_abs: f64) {
        self.count += 1;
        self.e_sum += e;
        self.e2_sum += e * e;
        self.m_abs_sum += m_abs;
        self.m2_sum += m_abs * m_abs;
    }
}

impl ObservableAccumulator {
    /// `generations_per_batch` controls the batch-means standard errors.
    pub fn new(n_spins: usize, n_individuals: usize, generations_per_batch: usize) -> Self {
        Self {
            n_spins: n_spins as f64,
            batch_target: generations_per_batch.max(1),
            count: 0,
            e_sum: 0.0,
            e2_sum: 0.0,
            m_abs_sum: 0.0,
            m2_sum: 0.0,
            individual_m_sum: alloc::vec![0.0; n_individuals],
            individual_samples: alloc::vec![0; n_individuals],
            generations_in_batch: 0,
            batch: BatchSums::default(),
            finished: Vec::new(),
        }
    }

    /// One individual's sample within the current generation.
    pub fn push_sample(&mut self, individual: usize, e_total: f64, m_total: f64) {
        let m_abs = libm::fabs(m_total) / self.n_spins;
        self.count += 1;
        self.e_sum += e_total;
        self.e2_sum += e_total * e_total;
        self.m_abs_sum += m_abs;
        self.m2_sum += m_abs * m_abs;
        self.individual_m_sum[individual] += m_total / self.n_spins;
        self.individual_samples[individual] += 1;
        self.batch.push(e_total, m_abs);
    }

    /// Close the current generation (advances batching).
    pub fn end_generation(&mut self) {
        self.generations_in_batch += 1;
        if self.generations_in_batch >= self.batch_target {
            self.finished.push(self.batch);
            self.batch = BatchSums::default();
            self.generations_in_batch = 0;
        }
    }

    pub fn finalize(mut self, t: f64) -> Result<Thermo, IsingError> {
        if self.count == 0 {
            return Err(IsingError::NoSamples);
        }
        if self.batch.count > 0 {
            self.finished.push(self.batch);
        }
        let n = self.count as f64;
        let n2 = self.n_spins;
        let e_mean_total = self.e_sum / n;
        let e2_mean = self.e2_sum / n;
        let m_abs_mean = self.m_abs_sum / n;
        let m2_mean = self.m2_sum / n;
        let c_h = (e2_mean - e_mean_total * e_mean_total) / (n2 * t * t);
        let chi = n2 * (m2_mean - m_abs_mean * m_abs_mean) / t;

        // Eq.-7 magnetization: |time average| per individual, averaged
        let mut m_eq7 = 0.0;
        let mut m_eq7_sq = 0.0;
        let mut with_samples = 0usize;
        for (sum, &cnt) in self.individual_m_sum.iter().zip(&self.individual_samples) {
            if cnt > 0 {
                let v = libm::fabs(sum / cnt as f64);
                m_eq7 += v;
                m_eq7_sq += v * v;
                with_samples += 1;
            }
        }
        m_eq7 /= with_samples as f64;
        let m_stderr = if with_samples > 1 {
            let var = (m_eq7_sq / with_samples as f64 - m_eq7 * m_eq7).max(0.0);
            libm::sqrt(var / (with_samples as f64 - 1.0))
        } else {
            0.0
        };

        // batch-means standard errors for the fluctuation estimators
        let (e_se, ch_se, mabs_se, chi_se) = self.batch_stderr(t);

        Ok(Thermo {
            t,
            e_mean: e_mean_total / n2,
            e_stderr: e_se / n2,
            c_h,
            c_h_stderr: ch_se,
            m_mean: m_eq7,
            m_stderr,
            m_abs_mean,
            m_abs_stderr: mabs_se,
            chi,
            chi_stderr: chi_se,
        })
    }

    fn batch_stderr(&self, t: f64) -> (f64, f64, f64, f64) {
        let n2 = self.n_spins;
        let usable: Vec<&BatchSums> = self.finished.iter().filter(|b| b.count > 1).collect();
        let b = usable.len();
        if b < 2 {
            return (0.0, 0.0, 0.0, 0.0);
        }
        let mut stats = [[0.0f64; 2]; 4]; // mean, m2 per estimator (Welford)
        for (k, batch) in usable.iter().enumerate() {
            let c = batch.count as f64;
            let e_mean = batch.e_sum / c;
            let ch = (batch.e2_sum / c - e_mean * e_mean) / (n2 * t * t);
            let m_abs = batch.m_abs_sum / c;
            let chi = n2 * (batch.m2_sum / c - m_abs * m_abs) / t;
            for (slot, value) in [e_mean, ch, m_abs, chi].into_iter().enumerate() {
                let delta = value - stats[slot][0];
                stats[slot][0] += delta / (k + 1) as f64;
                stats[slot][1] += delta * (value - stats[slot][0]);
            }
        }
        let se = |slot: usize| libm::sqrt(stats[slot][1] / ((b - 1) as f64 * b as f64));
        (se(0), se(1), se(2), se(3))
    }
}
