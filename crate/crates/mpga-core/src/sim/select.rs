use alloc::vec::Vec;
use rand::Rng;

use super::{Individual, SimError};

/// Draw budget multiplier for accept/reject selection.
const ACCEPT_BUDGET_PER_SLOT: u64 = 10_000;

/// Cumulative Boltzmann weights over a population, built once per selection
/// pass. Weights are exp(-beta (f - f_min)): the max-shift keeps the
/// exponentials bounded for either sign of beta.
#[derive(Debug, Clone)]
pub struct WeightTable {
    cumulative: Vec<f64>,
}

impl WeightTable {
    pub fn build(population: &[Individual], beta: f64) -> Result<Self, SimError> {
        if population.is_empty() {
            return Err(SimError::EmptyPopulation);
        }
        // shift so the largest exponent is zero
        let extreme = if beta >= 0.0 {
            population
                .iter()
                .map(|ind| ind.fitness)
                .fold(f64::INFINITY, f64::min)
        } else {
            population
                .iter()
                .map(|ind| ind.fitness)
                .fold(f64::NEG_INFINITY, f64::max)
        };
        let mut cumulative = Vec::with_capacity(population.len());
        let mut acc = 0.0;
        for ind in population {
            acc += libm::exp(-beta * (ind.fitness - extreme));
            cumulative.push(acc);
        }
        Ok(Self { cumulative })
    }

    pub fn draw(&self, rng: &mut impl Rng) -> usize {
        let total = *self.cumulative.last().expect("non-empty");
        let u = rng.gen::<f64>() * total;
        match self
            .cumulative
            .binary_search_by(|probe| probe.partial_cmp(&u).expect("finite weights"))
        {
            Ok(i) | Err(i) => i.min(self.cumulative.len() - 1),
        }
    }
}

/// One Boltzmann-weighted draw: individual alpha with probability
/// e^{-beta f_alpha} / sum_i e^{-beta f_i}.
pub fn boltzmann_select<'a>(
    population: &'a [Individual],
    beta: f64,
    rng: &mut impl Rng,
) -> Result<&'a Individual, SimError> {
    let table = WeightTable::build(population, beta)?;
    Ok(&population[table.draw(rng)])
}

/// Algorithm-1 selection: repeatedly pick a uniformly random individual and
/// accept a copy with its acceptance probability until `n_out` are accepted.
/// The source population is untouched. Errors out after a bounded number of
/// draws so a population of all-zero probabilities cannot loop forever.
pub fn accept_reject_select<T: Clone>(
    population: &[T],
    acceptance: &[f64],
    n_out: usize,
    rng: &mut impl Rng,
) -> Result<Vec<T>, SimError> {
    if population.is_empty() || population.len() != acceptance.len() {
        return Err(SimError::EmptyPopulation);
    }
    let budget = ACCEPT_BUDGET_PER_SLOT * n_out as u64;
    let mut out = Vec::with_capacity(n_out);
    let mut attempts = 0u64;
    while out.len() < n_out {
        if attempts >= budget {
            return Err(SimError::AcceptanceBudget { attempts });
        }
        attempts += 1;
        let idx = rng.gen_range(0..population.len());
        if rng.gen::<f64>() <= acceptance[idx] {
            out.push(population[idx].clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use alloc::vec;

    fn pop(fitness: &[f64]) -> Vec<Individual> {
        fitness
            .iter()
            .map(|&f| Individual {
                genome: vec![1],
                fitness: f,
            })
            .collect()
    }

    #[test]
    fn beta_zero_is_uniform() {
        let population = pop(&[0.0, 1.0, 2.0, 3.0, 4.0]);
        let mut rng = stream(1, &[0]);
        let mut counts = [0u32; 5];
        let draws = 100_000;
        let table = WeightTable::build(&population, 0.0).unwrap();
        for _ in 0..draws {
            counts[table.draw(&mut rng)] += 1;
        }
        // each frequency within 3 sigma of 1/5
        let p = 0.2;
        let sigma = (p * (1.0 - p) / draws as f64).sqrt();
        for &c in &counts {
            let freq = c as f64 / draws as f64;
            assert!((freq - p).abs() < 3.0 * sigma + 1e-9, "freq {freq}");
        }
    }

    #[test]
    fn two_to_one_weighting() {
        // fitness 0 and ln2/beta give weights 1 and 1/2
        let beta = 0.25;
        let f2 = core::f64::consts::LN_2 / beta;
        let population = pop(&[0.0, f2]);
        let mut rng = stream(2, &[0]);
        let mut first = 0u32;
        let draws = 200_000;
        for _ in 0..draws {
            let ind = boltzmann_select(&population, beta, &mut rng).unwrap();
            if ind.fitness == 0.0 {
                first += 1;
            }
        }
        let freq = first as f64 / draws as f64;
        let sigma = (2.0 / 9.0 / draws as f64).sqrt();
        assert!((freq - 2.0 / 3.0).abs() < 4.0 * sigma, "freq {freq}");
    }

    #[test]
    fn negative_beta_prefers_high_fitness() {
        // the sign convention of the captions: beta < 0 selects maximizers
        let population = pop(&[0.0, 10.0]);
        let mut rng = stream(8, &[0]);
        let mut high = 0u32;
        for _ in 0..20_000 {
            if boltzmann_select(&population, -0.25, &mut rng).unwrap().fitness > 5.0 {
                high += 1;
            }
        }
        let freq = high as f64 / 20_000.0;
        // weights e^{2.5} vs 1: expected 0.924
        assert!((freq - 0.924).abs() < 0.01, "freq {freq}");
    }

    #[test]
    fn single_individual_always_selected() {
        let population = pop(&[7.0]);
        let mut rng = stream(3, &[0]);
        for _ in 0..100 {
            assert_eq!(
                boltzmann_select(&population, 1.0, &mut rng).unwrap().fitness,
                7.0
            );
        }
    }

    #[test]
    fn accept_reject_all_ones_resamples() {
        let population = pop(&[1.0, 2.0, 3.0]);
        let mut rng = stream(4, &[0]);
        let out = accept_reject_select(&population, &[1.0, 1.0, 1.0], 30, &mut rng).unwrap();
        assert_eq!(out.len(), 30);
    }

    #[test]
    fn accept_reject_composition_ratio() {
        // acceptance 1 and 0.5: expected composition (2/3, 1/3)
        let population = pop(&[0.0, 1.0]);
        let mut rng = stream(5, &[0]);
        let mut first = 0usize;
        let total = 60_000;
        let out = accept_reject_select(&population, &[1.0, 0.5], total, &mut rng).unwrap();
        for ind in &out {
            if ind.fitness == 0.0 {
                first += 1;
            }
        }
        let freq = first as f64 / total as f64;
        let sigma = (2.0 / 9.0 / total as f64).sqrt();
        assert!((freq - 2.0 / 3.0).abs() < 4.0 * sigma, "freq {freq}");
    }

    #[test]
    fn accept_reject_slow_single_individual_terminates() {
        let population = pop(&[1.0]);
        let mut rng = stream(6, &[0]);
        let out = accept_reject_select(&population, &[0.01], 5, &mut rng).unwrap();
        assert_eq!(out.len(), 5);
    }

    #[test]
    fn accept_reject_zero_probability_errors() {
        let population = pop(&[1.0, 2.0]);
        let mut rng = stream(7, &[0]);
        assert!(matches!(
            accept_reject_select(&population, &[0.0, 0.0], 3, &mut rng),
            Err(SimError::AcceptanceBudget { .. })
        ));
    }
}
