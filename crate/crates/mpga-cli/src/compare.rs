//! Theory-vs-empirical comparison: per-generation, per-island,
//! per-cumulant relative errors with spike-window masking around migration
//! events, plus island-averaged series summaries.

use serde::Serialize;

use crate::trajectory_io::TrajectoryTable;
use crate::AppError;

#[derive(Debug, Clone, Serialize)]
pub struct CumulantSummary {
    pub order: usize,
    pub max_rel: f64,
    pub mean_rel: f64,
    pub max_rel_unmasked: f64,
    pub mean_rel_unmasked: f64,
    /// Same metrics on the island-averaged series.
    pub island_avg_max_rel: f64,
    pub island_avg_max_rel_unmasked: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonReport {
    pub spike_window: usize,
    pub migration_generations: Vec<usize>,
    pub summaries: Vec<CumulantSummary>,
    #[serde(skip)]
    pub rows: Vec<ReportRow>,
}

#[derive(Debug, Clone)]
pub struct ReportRow {
    pub generation: usize,
    pub island: usize,
    pub order: usize,
    pub relative_error: f64,
    pub masked: bool,
}

/// Relative error with the empirical value as reference; exact agreement is
/// zero even at a zero reference.
fn relative(theory: f64, empirical: f64) -> f64 {
    if theory == empirical {
        0.0
    } else {
        (theory - empirical).abs() / empirical.abs()
    }
}

pub fn compare(
    theory: &TrajectoryTable,
    empirical: &TrajectoryTable,
    spike_window: usize,
) -> Result<ComparisonReport, AppError> {
    if theory.n_islands != empirical.n_islands || theory.n_generations != empirical.n_generations
    {
        return Err(AppError::config(format!(
            "shape mismatch: theory {}x{} vs empirical {}x{}",
            theory.n_generations, theory.n_islands, empirical.n_generations, empirical.n_islands
        )));
    }
    let order = theory.order.min(empirical.order);
    let migration_generations = if !theory.migration_generations.is_empty() {
        theory.migration_generations.clone()
    } else {
        empirical.migration_generations.clone()
    };
    let masked = |n: usize| {
        migration_generations
            .iter()
            .any(|&m| n.abs_diff(m) <= spike_window)
    };

    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    for i in 1..=order {
        let mut acc = Accumulator::default();
        let mut acc_avg = Accumulator::default();
        for n in 0..=theory.n_generations {
            let is_masked = masked(n);
            let mut theo_sum = 0.0;
            let mut emp_sum = 0.0;
            for l in 0..theory.n_islands {
                let t = theory.kappa[n][l][i - 1];
                let e = empirical.kappa[n][l][i - 1];
                theo_sum += t;
                emp_sum += e;
                let rel = relative(t, e);
                rows.push(ReportRow {
                    generation: n,
                    island: l,
                    order: i,
                    relative_error: rel,
                    masked: is_masked,
                });
                acc.push(rel, is_masked);
            }
            let islands = theory.n_islands as f64;
            acc_avg.push(relative(theo_sum / islands, emp_sum / islands), is_masked);
        }
        summaries.push(CumulantSummary {
            order: i,
            max_rel: acc.max_all,
            mean_rel: acc.mean_all(),
            max_rel_unmasked: acc.max_unmasked,
            mean_rel_unmasked: acc.mean_unmasked(),
            island_avg_max_rel: acc_avg.max_all,
            island_avg_max_rel_unmasked: acc_avg.max_unmasked,
        });
    }
    Ok(ComparisonReport {
        spike_window,
        migration_generations,
        summaries,
        rows,
    })
}

#[derive(Default)]
struct Accumulator {
    max_all: f64,
    sum_all: f64,
    count_all: usize,
    max_unmasked: f64,
    sum_unmasked: f64,
    count_unmasked: usize,
}

impl Accumulator {
    fn push(&mut self, rel: f64, masked: bool) {
        self.max_all = self.max_all.max(rel);
        self.sum_all += rel;
        self.count_all += 1;
        if !masked {
            self.max_unmasked = self.max_unmasked.max(rel);
            self.sum_unmasked += rel;
            self.count_unmasked += 1;
        }
    }

    fn mean_all(&self) -> f64 {
        self.sum_all / self.count_all.max(1) as f64
    }

    fn mean_unmasked(&self) -> f64 {
        self.sum_unmasked / self.count_unmasked.max(1) as f64
    }
}

pub fn report_csv(report: &ComparisonReport) -> String {
    let mut out = String::from("# mpga comparison report v1\n");
    out.push_str("generation,island,order,relative_error,masked\n");
    for row in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            row.generation,
            row.island,
            row.order,
            crate::format::sig9(row.relative_error),
            u8::from(row.masked)
        ));
    }
    out
}
