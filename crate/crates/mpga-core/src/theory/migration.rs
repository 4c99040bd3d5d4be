use alloc::vec::Vec;

use super::{TheoryError, Topology};
use crate::stats::{cumulants_from_moments, moments_from_cumulants, CumulantVector, MomentVector};

/// Positive-part cutoff for the step function Theta(n_r): exactly-balanced
/// topologies produce n_r = 0 up to rounding, which must not trigger fill.
pub const THETA_EPS: f64 = 1e-12;

fn theta(x: f64) -> f64 {
    if x > THETA_EPS {
        1.0
    } else {
        0.0
    }
}

/// Per-island migration rates: stay rate n_0 = 1 - r_mig, inflow rate
/// n_m = r_mig * sum_j normalized(j, l), fill rate n_r = r_mig - n_m.
#[derive(Debug, Clone, PartialEq)]
pub struct MigrationRates {
    r_mig: f64,
    stay: f64,
    inflow: Vec<f64>,
    fill: Vec<f64>,
}

impl MigrationRates {
    pub fn compute(topology: &Topology, r_mig: f64) -> Result<Self, TheoryError> {
        if !(0.0..=1.0).contains(&r_mig) || !r_mig.is_finite() {
            return Err(TheoryError::RateOutOfRange { r_mig });
        }
        let stay = 1.0 - r_mig;
        let inflow: Vec<f64> = (0..topology.n_islands())
            .map(|l| r_mig * topology.inflow_weight(l))
            .collect();
        let fill: Vec<f64> = inflow.iter().map(|nm| r_mig - nm).collect();
        let rates = Self {
            r_mig,
            stay,
            inflow,
            fill,
        };
        for island in 0..topology.n_islands() {
            if rates.denominator(island) <= 0.0 {
                return Err(TheoryError::ZeroDenominator { island });
            }
        }
        Ok(rates)
    }

    pub fn r_mig(&self) -> f64 {
        self.r_mig
    }

    /// n_0 = 1 - r_mig.
    pub fn stay(&self) -> f64 {
        self.stay
    }

    /// n_m for `island`.
    pub fn inflow(&self, island: usize) -> f64 {
        self.inflow[island]
    }

    /// n_r for `island`.
    pub fn fill(&self, island: usize) -> f64 {
        self.fill[island]
    }

    /// Fill weight n_r * Theta(n_r).
    pub fn fill_weight(&self, island: usize) -> f64 {
        let nr = self.fill[island];
        nr * theta(nr)
    }

    /// Eq. 3 denominator n_0 + n_m + n_r Theta(n_r).
    pub fn denominator(&self, island: usize) -> f64 {
        self.stay + self.inflow[island] + self.fill_weight(island)
    }
}

/// Gram-Charlier background used to fill undersupplied islands: the cumulants
/// of uniformly random genomes for the problem at hand.
#[derive(Debug, Clone, PartialEq)]
pub struct BackgroundDistribution {
    kappa: CumulantVector,
}

impl BackgroundDistribution {
    pub fn new(kappa: CumulantVector) -> Self {
        Self { kappa }
    }

    pub fn kappa(&self) -> &CumulantVector {
        &self.kappa
    }
}

/// Post-migration cumulants for every island.
///
/// The post-migration population of island l is a mixture: its own residents
/// with weight n_0, island j's migrants with weight r_mig * normalized(j, l),
/// and random fills with weight n_r Theta(n_r). Mixture raw moments are the
/// weight-normalized average of component raw moments; converting them back
/// reproduces the closed-form first/second-cumulant mixing formulas and the
/// third-cumulant one.
pub fn migration_update(
    kappa_all: &[CumulantVector],
    topology: &Topology,
    rates: &MigrationRates,
    background: &BackgroundDistribution,
) -> Result<Vec<CumulantVector>, TheoryError> {
    let n = topology.n_islands();
    if kappa_all.len() != n {
        return Err(TheoryError::IslandCountMismatch {
            expected: n,
            got: kappa_all.len(),
        });
    }
    if rates.r_mig() == 0.0 {
        return Ok(kappa_all.to_vec());
    }
    let order = kappa_all[0].order();
    let moments: Vec<MomentVector> = kappa_all.iter().map(moments_from_cumulants).collect();
    let bg_moments = moments_from_cumulants(&background.kappa().resized(order)?);

    let mut out = Vec::with_capacity(n);
    for l in 0..n {
        let denom = rates.denominator(l);
        if denom <= 0.0 {
            return Err(TheoryError::ZeroDenominator { island: l });
        }
        let fill_w = rates.fill_weight(l);
        let mut mixed = alloc::vec![0.0; order];
        for (k, m) in mixed.iter_mut().enumerate() {
            let mut acc = rates.stay() * moments[l].mu(k + 1);
            for (j, source) in moments.iter().enumerate() {
                let w = rates.r_mig() * topology.normalized_weight(j, l);
                if w > 0.0 {
                    acc += w * source.mu(k + 1);
                }
            }
            if fill_w > 0.0 {
                acc += fill_w * bg_moments.mu(k + 1);
            }
            *m = acc / denom;
        }
        out.push(cumulants_from_moments(&MomentVector::new(mixed))?);
    }
    Ok(out)
}
