use rand::Rng;

use super::Genome;
use crate::stats::CumulantVector;

/// An optimization problem over +-1 genomes. Fitness is minimized.
pub trait Problem: Sync {
    fn genome_length(&self) -> usize;

    fn fitness(&self, genome: &Genome) -> f64;

    /// Uniformly random genome; also the distribution of migration fills.
    fn random_genome(&self, rng: &mut impl Rng) -> Genome {
        (0..self.genome_length())
            .map(|_| if rng.gen::<bool>() { 1i8 } else { -1i8 })
            .collect()
    }

    /// Analytic cumulants of the fitness of a uniformly random genome,
    /// as a Gaussian background (mean and variance only).
    fn background(&self, order: usize) -> CumulantVector;
}

/// Ideal one-dimensional paramagnet in a unit field: fitness is the plain
/// spin sum, minimized by the all-down configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Paramagnet {
    length: usize,
}

impl Paramagnet {
    pub fn new(length: usize) -> Self {
        Self { length }
    }

    pub fn length(&self) -> usize {
        self.length
    }
}

impl Problem for Paramagnet {
    fn genome_length(&self) -> usize {
        self.length
    }

    fn fitness(&self, genome: &Genome) -> f64 {
        genome.iter().map(|&s| s as i32).sum::<i32>() as f64
    }

    fn background(&self, order: usize) -> CumulantVector {
        CumulantVector::gaussian(0.0, self.length as f64, order)
            .expect("length is a valid variance")
    }
}
