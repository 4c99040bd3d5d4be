use alloc::vec::Vec;
use rand::Rng;

use super::{Individual, IslandState, Problem, RunConfig, SimError, WeightTable};
use crate::theory::Topology;

/// Uniform crossover: per-locus coin flip between the two parents.
fn uniform_crossover(a: &Individual, b: &Individual, rng: &mut impl Rng) -> super::Genome {
    a.genome
        .iter()
        .zip(&b.genome)
        .map(|(&ga, &gb)| if rng.gen::<bool>() { ga } else { gb })
        .collect()
}

/// Per-gene mutation: each gene flips sign with probability r_mut.
fn mutate(genome: &mut super::Genome, r_mut: f64, rng: &mut impl Rng) -> bool {
    let mut changed = false;
    for gene in genome.iter_mut() {
        if rng.gen::<f64>() < r_mut {
            *gene = -*gene;
            changed = true;
        }
    }
    changed
}

fn offspring(
    source: &[Individual],
    table: &WeightTable,
    config: &RunConfig,
    problem: &impl Problem,
    rng: &mut impl Rng,
) -> Individual {
    let first = &source[table.draw(rng)];
    let mut genome;
    let mut dirty;
    if config.r_cross > 0.0 && rng.gen::<f64>() < config.r_cross {
        let second = &source[table.draw(rng)];
        genome = uniform_crossover(first, second, rng);
        dirty = true;
    } else {
        genome = first.genome.clone();
        dirty = false;
    }
    if config.r_mut > 0.0 {
        dirty |= mutate(&mut genome, config.r_mut, rng);
    }
    if dirty {
        Individual::from_genome(genome, problem)
    } else {
        Individual {
            genome,
            fitness: first.fitness,
        }
    }
}

/// One non-migration generation: a fresh population of N_P individuals built
/// by repeated Boltzmann selection, with crossover at rate r_cross and
/// per-gene mutation at rate r_mut.
pub fn step_generation(
    island: &mut IslandState,
    config: &RunConfig,
    problem: &impl Problem,
) -> Result<(), SimError> {
    let table = WeightTable::build(&island.population, config.beta)?;
    let mut next = Vec::with_capacity(config.island_population);
    for _ in 0..config.island_population {
        next.push(offspring(
            &island.population,
            &table,
            config,
            problem,
            &mut island.rng,
        ));
    }
    island.population = next;
    island.generation += 1;
    Ok(())
}

/// One migration generation: the generation's selection pass partitioned
/// across sources.
///
/// Every island draws m = floor(r_mig N_P) (+ a Bernoulli extra for the
/// fractional part) departure slots and keeps N_P - m Boltzmann-selected
/// residents. Islands with outgoing edges send m Boltzmann-selected copies,
/// each routed along an outgoing edge with probability proportional to the
/// normalized adjacency row; a sender keeps an individual only if it was also
/// drawn as a resident. Receivers append incoming migrants (senders in index
/// order) and fill any remaining deficit to N_P with uniformly random
/// genomes. Inflow beyond N_P is kept; the next selection pass restores the
/// population size.
pub fn migrate(
    islands: &mut [IslandState],
    topology: &Topology,
    config: &RunConfig,
    problem: &impl Problem,
) -> Result<(), SimError> {
    let n_pop = config.island_population;
    let n_islands = islands.len();
    let mut incoming: Vec<Vec<Individual>> = (0..n_islands).map(|_| Vec::new()).collect();
    let mut kept: Vec<Vec<Individual>> = Vec::with_capacity(n_islands);

    let exact = config.r_mig * n_pop as f64;
    let base = exact as usize; // floor
    let frac = exact - base as f64;

    for island in islands.iter_mut() {
        let extra = frac > 0.0 && island.rng.gen::<f64>() < frac;
        let departures = (base + usize::from(extra)).min(n_pop);
        let table = WeightTable::build(&island.population, config.beta)?;

        let mut residents = Vec::with_capacity(n_pop - departures);
        for _ in 0..n_pop - departures {
            residents.push(island.population[table.draw(&mut island.rng)].clone());
        }

        if topology.out_degree(island.id) > 0 {
            for _ in 0..departures {
                let migrant = island.population[table.draw(&mut island.rng)].clone();
                let dest = route(topology, island.id, &mut island.rng);
                incoming[dest].push(migrant);
            }
        }
        kept.push(residents);
    }

    for (island, residents) in islands.iter_mut().zip(kept) {
        let mut next = residents;
        next.append(&mut incoming[island.id]);
        let expected = next.len().max(n_pop);
        while next.len() < n_pop {
            next.push(island.random_fill(problem));
        }
        if next.len() != expected {
            return Err(SimError::PopulationSize {
                island: island.id,
                expected,
                got: next.len(),
            });
        }
        if config.r_mut > 0.0 {
            for ind in next.iter_mut() {
                let mut genome = core::mem::take(&mut ind.genome);
                if mutate(&mut genome, config.r_mut, &mut island.rng) {
                    *ind = Individual::from_genome(genome, problem);
                } else {
                    ind.genome = genome;
                }
            }
        }
        island.population = next;
        island.generation += 1;
    }
    Ok(())
}

/// Destination of one migrant: an outgoing edge drawn with the normalized
/// row weights.
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
