use alloc::vec::Vec;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{
    mh_sweep, spin_crossover, uniform_spin_crossover, IsingError, ObservableAccumulator,
    SpinLattice, Thermo,
};
use crate::rng::stream;
use crate::sim::accept_reject_select;
use crate::theory::Topology;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HybridMode {
    /// Full MPGA during thermalization: Metropolis mutation, crossover,
    /// migration and Algorithm-1 selection.
    Mpga,
    /// Plain Metropolis during thermalization: the same population just
    /// sweeps, no evolutionary operators.
    PlainMh,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CrossoverKind {
    /// Periodic rectangular patch swap (preserves spin domains).
    #[default]
    PatchSwap,
    /// Per-site coin flip.
    Uniform,
}

#[derive(Debug, Clone)]
pub struct HybridConfig {
    pub lattice_size: usize,
    pub n_islands: usize,
    pub island_population: usize,
    /// Total generations; one Metropolis sweep per individual per generation.
    pub n_generations: usize,
    /// Thermalization cutoff n_0: generations 1..=n_0 evolve, the rest only
    /// sweep and measure.
    pub therm_cutoff: usize,
    pub migration_period: usize,
    pub r_mig: f64,
    pub r_cross: f64,
    pub crossover_kind: CrossoverKind,
    pub mode: HybridMode,
    pub master_seed: u64,
    /// Measurement generations per standard-error batch.
    pub generations_per_batch: usize,
}

struct IsingIsland {
    lattices: Vec<SpinLattice>,
    rng: ChaCha8Rng,
}

/// Acceptance map of Algorithm-1 selection: p_alpha = e^{-(E_alpha - E_min)/T}.
/// The island's best individual always has probability one, so selection
/// terminates.
fn acceptance_map(lattices: &[SpinLattice], t: f64) -> Vec<f64> {
    let e_min = lattices.iter().map(|l| l.energy()).min().expect("non-empty");
    lattices
        .iter()
        .map(|l| libm::exp(-((l.energy() - e_min) as f64) / t))
        .collect()
}

/// One MPGA/Metropolis hybrid run at a single temperature.
///
/// Phase 1 (generations 1..=therm_cutoff, Mpga mode): every individual takes
/// one Metropolis sweep (the mutation operator), crossover replaces each slot
/// with a patch-swap child at rate r_cross, migration runs every
/// migration_period generations, and Algorithm-1 selection rebuilds each
/// island. Phase 2: pure sweeps on every individual, observables accumulated
/// per Eq. 6-7 conventions.
///
/// `tags` must uniquely identify the run (temperature index, experiment,
/// method) so random streams never collide across runs.
pub fn mpga_mh_run(
    config: &HybridConfig,
    topology: &Topology,
    t: f64,
    tags: &[u64],
) -> Result<Thermo, IsingError> {
    if t <= 0.0 {
        return Err(IsingError::NonPositiveTemperature { t });
    }
    if config.therm_cutoff >= config.n_generations {
        return Err(IsingError::BadCutoff {
            therm_cutoff: config.therm_cutoff,
            n_generations: config.n_generations,
        });
    }
    let n_pop = config.island_population;
    let mut islands: Vec<IsingIsland> = (0..config.n_islands)
        .map(|l| {
            let mut tag_path: Vec<u64> = tags.to_vec();
            tag_path.push(l as u64);
            let mut rng = stream(config.master_seed, &tag_path);
            let lattices = (0..n_pop)
                .map(|_| SpinLattice::random(config.lattice_size, &mut rng))
                .collect();
            IsingIsland { lattices, rng }
        })
        .collect();

    let n_spins = config.lattice_size * config.lattice_size;
    let mut acc = ObservableAccumulator::new(
        n_spins,
        config.n_islands * n_pop,
        config.generations_per_batch,
    );

    for generation in 1..=config.n_generations {
        // mutation: one Metropolis sweep per individual
        for island in islands.iter_mut() {
            for lat in island.lattices.iter_mut() {
                mh_sweep(lat, t, &mut island.rng);
            }
        }
        let evolving = generation <= config.therm_cutoff && config.mode == HybridMode::Mpga;
        if evolving {
            if config.r_cross > 0.0 {
                for island in islands.iter_mut() {
                    crossover_pass(island, config.r_cross, config.crossover_kind)?;
                }
            }
            if config.r_mig > 0.0
                && config.n_islands > 1
                && generation % config.migration_period == 0
            {
                migrate_lattices(&mut islands, topology, config, t)?;
            }
            for island in islands.iter_mut() {
                let acceptance = acceptance_map(&island.lattices, t);
                island.lattices =
                    accept_reject_select(&island.lattices, &acceptance, n_pop, &mut island.rng)?;
            }
        }
        if generation > config.therm_cutoff {
            for (l, island) in islands.iter().enumerate() {
                for (i, lat) in island.lattices.iter().enumerate() {
                    acc.push_sample(
                        l * n_pop + i,
                        lat.energy() as f64,
                        lat.magnetization() as f64,
                    );
                }
            }
            acc.end_generation();
        }
    }
    acc.finalize(t)
}

fn crossover_pass(
    island: &mut IsingIsland,
    r_cross: f64,
    kind: CrossoverKind,
) -> Result<(), IsingError> {
    let n = island.lattices.len();
    let mut next = Vec::with_capacity(n);
    for slot in 0..n {
        if island.rng.gen::<f64>() < r_cross {
            let other = island.rng.gen_range(0..n);
            let child = match kind {
                CrossoverKind::PatchSwap => spin_crossover(
                    &island.lattices[slot],
                    &island.lattices[other],
                    &mut island.rng,
                )?,
                CrossoverKind::Uniform => uniform_spin_crossover(
                    &island.lattices[slot],
                    &island.lattices[other],
                    &mut island.rng,
                )?,
            };
            next.push(child);
        } else {
            next.push(island.lattices[slot].clone());
        }
    }
    island.lattices = next;
    Ok(())
}

/// Migration between lattice islands, mirroring the simulator's semantics
/// with Algorithm-1 acceptance as the selector: each island keeps
/// N_P - m accept/reject-selected residents and sends m selected copies along
/// its outgoing edges; deficits are filled with fresh random lattices.
fn migrate_lattices(
    islands: &mut [IsingIsland],
    topology: &Topology,
    config: &HybridConfig,
    t: f64,
) -> Result<(), IsingError> {
    let n_pop = config.island_population;
    let exact = config.r_mig * n_pop as f64;
    let base = exact as usize;
    let frac = exact - base as f64;
    let n_islands = islands.len();
    let mut incoming: Vec<Vec<SpinLattice>> = (0..n_islands).map(|_| Vec::new()).collect();
    let mut kept: Vec<Vec<SpinLattice>> = Vec::with_capacity(n_islands);

    for (id, island) in islands.iter_mut().enumerate() {
        let extra = frac > 0.0 && island.rng.gen::<f64>() < frac;
        let departures = (base + usize::from(extra)).min(n_pop);
        let acceptance = acceptance_map(&island.lattices, t);
        let residents = accept_reject_select(
            &island.lattices,
            &acceptance,
            n_pop - departures,
            &mut island.rng,
        )?;
        if topology.out_degree(id) > 0 {
            let migrants =
                accept_reject_select(&island.lattices, &acceptance, departures, &mut island.rng)?;
            for migrant in migrants {
                let dest = route(topology, id, &mut island.rng);
                incoming[dest].push(migrant);
            }
        }
        kept.push(residents);
    }
    for (id, (island, residents)) in islands.iter_mut().zip(kept).enumerate() {
        let mut next = residents;
        next.append(&mut incoming[id]);
        while next.len() < n_pop {
            let lat = SpinLattice::random(config.lattice_size, &mut island.rng);
            next.push(lat);
        }
        island.lattices = next;
    }
    Ok(())
}

fn route(topology: &Topology, from: usize, rng: &mut impl Rng) -> usize {
    let u = rng.gen::<f64>();
    let mut acc = 0.0;
    let mut last = from;
    for to in 0..topology.n_islands() {
        let w = topology.normalized_weight(from, to);
        if w > 0.0 {
            acc += w;
            last = to;
            if u < acc {
                return to;
            }
        }
    }
    last
}

/// Plain single-chain Metropolis estimates: `therm_sweeps` discarded, then
/// `measure_sweeps` sampled once per sweep. The reference estimator for the
/// budget comparisons.
pub fn plain_mh_thermo(
    lattice_size: usize,
    t: f64,
    therm_sweeps: usize,
    measure_sweeps: usize,
    master_seed: u64,
    tags: &[u64],
    sweeps_per_batch: usize,
) -> Result<Thermo, IsingError> {
    if t <= 0.0 {
        return Err(IsingError::NonPositiveTemperature { t });
    }
    let mut rng = stream(master_seed, tags);
    let mut lat = SpinLattice::random(lattice_size, &mut rng);
    for _ in 0..therm_sweeps {
        mh_sweep(&mut lat, t, &mut rng);
    }
    let mut acc = ObservableAccumulator::new(lattice_size * lattice_size, 1, sweeps_per_batch);
    for _ in 0..measure_sweeps {
        mh_sweep(&mut lat, t, &mut rng);
        acc.push_sample(0, lat.energy() as f64, lat.magnetization() as f64);
        acc.end_generation();
    }
    acc.finalize(t)
}
