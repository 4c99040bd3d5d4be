use alloc::vec::Vec;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{Genome, Problem};
use crate::stats::{sample_cumulants, CumulantVector, StatsError};

/// One candidate solution with its cached fitness.
#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub genome: Genome,
    pub fitness: f64,
}

impl Individual {
    pub fn from_genome(genome: Genome, problem: &impl Problem) -> Self {
        let fitness = problem.fitness(&genome);
        Self { genome, fitness }
    }
}

/// One island: a population of N_P individuals plus an independent random
/// stream derived from (master seed, replication, island id).
#[derive(Debug, Clone)]
pub struct IslandState {
    pub id: usize,
    pub population: Vec<Individual>,
    pub rng: ChaCha8Rng,
    pub generation: usize,
}

impl IslandState {
    pub fn random(
        id: usize,
        size: usize,
        problem: &impl Problem,
        mut rng: ChaCha8Rng,
    ) -> Self {
        let population = (0..size)
            .map(|_| Individual::from_genome(problem.random_genome(&mut rng), problem))
            .collect();
        Self {
            id,
            population,
            rng,
            generation: 0,
        }
    }

    pub fn fitness_values(&self) -> Vec<f64> {
        self.population.iter().map(|ind| ind.fitness).collect()
    }

    /// Plain sample cumulants of the island's fitness distribution.
    pub fn cumulants(&self, order: usize) -> Result<CumulantVector, StatsError> {
        sample_cumulants(&self.fitness_values(), order)
    }

    /// Draw a uniformly random genome from the problem's background and wrap
    /// it as an individual (migration fill).
    pub fn random_fill(&mut self, problem: &impl Problem) -> Individual {
        Individual::from_genome(problem.random_genome(&mut self.rng), problem)
    }

    /// Uniform random index into the population.
    pub fn random_index(&mut self) -> usize {
        self.rng.gen_range(0..self.population.len())
    }
}
