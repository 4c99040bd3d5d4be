use alloc::vec::Vec;

use super::{
    migration_update, selection_update_boltzmann, BackgroundDistribution, MigrationRates,
    TheoryError, Topology,
};
use crate::stats::CumulantVector;

#[derive(Debug, Clone)]
pub struct TheoryParams {
    pub beta: f64,
    pub n_pop: u64,
    pub n_generations: usize,
    pub migration_period: usize,
    pub r_mig: f64,
    pub background: BackgroundDistribution,
}

/// Per-island, per-generation cumulant series, with markers for migration
/// generations and the post-migration (pre-selection) cumulants at each event.
#[derive(Debug, Clone)]
pub struct TheoryTrajectory {
    n_islands: usize,
    /// generations[n][l] = cumulants of island l at generation boundary n.
    generations: Vec<Vec<CumulantVector>>,
    migration_generations: Vec<usize>,
    /// (generation, per-island cumulants after mixing, before selection).
    post_migration: Vec<(usize, Vec<CumulantVector>)>,
}

impl TheoryTrajectory {
    pub fn n_islands(&self) -> usize {
        self.n_islands
    }

    pub fn n_generations(&self) -> usize {
        self.generations.len() - 1
    }

    pub fn at(&self, generation: usize, island: usize) -> &CumulantVector {
        &self.generations[generation][island]
    }

    pub fn generation(&self, n: usize) -> &[CumulantVector] {
        &self.generations[n]
    }

    pub fn migration_generations(&self) -> &[usize] {
        &self.migration_generations
    }

    pub fn is_migration_generation(&self, n: usize) -> bool {
        self.migration_generations.binary_search(&n).is_ok()
    }

    pub fn post_migration(&self) -> &[(usize, Vec<CumulantVector>)] {
        &self.post_migration
    }
}

/// Propagate initial per-island cumulants over `n_generations`.
///
/// On generations n > 0 with n % migration_period == 0, migration mixing is
/// applied first, then the selection update; every other generation applies
/// selection alone. Errors are annotated with the generation and island where
/// they occurred.
pub fn predict_trajectory(
    initial: &[CumulantVector],
    topology: &Topology,
    params: &TheoryParams,
) -> Result<TheoryTrajectory, TheoryError> {
    if params.migration_period == 0 {
        return Err(TheoryError::MigrationPeriodZero);
    }
    if initial.len() != topology.n_islands() {
        return Err(TheoryError::IslandCountMismatch {
            expected: topology.n_islands(),
            got: initial.len(),
        });
    }
    let rates = MigrationRates::compute(topology, params.r_mig)?;
    let mut current: Vec<CumulantVector> = initial.to_vec();
    let mut generations = Vec::with_capacity(params.n_generations + 1);
    generations.push(current.clone());
    let mut migration_generations = Vec::new();
    let mut post_migration = Vec::new();

    for n in 1..=params.n_generations {
        if n % params.migration_period == 0 && params.r_mig > 0.0 {
            current = migration_update(&current, topology, &rates, &params.background)
                .map_err(|e| annotate(e, n, None))?;
            migration_generations.push(n);
            post_migration.push((n, current.clone()));
        }
        let mut next = Vec::with_capacity(current.len());
        for (island, kappa) in current.iter().enumerate() {
            let updated = selection_update_boltzmann(kappa, params.beta, params.n_pop)
                .map_err(|e| annotate(e, n, Some(island)))?;
            next.push(updated);
        }
        current = next;
        generations.push(current.clone());
    }

    Ok(TheoryTrajectory {
        n_islands: topology.n_islands(),
        generations,
        migration_generations,
        post_migration,
    })
}

fn annotate(e: TheoryError, generation: usize, island: Option<usize>) -> TheoryError {
    match e {
        TheoryError::NegativeVariance { kappa2, .. } => TheoryError::NegativeVariance {
            generation,
            island: island.unwrap_or(0),
            kappa2,
        },
        other => other,
    }
}
