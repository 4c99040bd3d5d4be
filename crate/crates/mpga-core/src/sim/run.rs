use alloc::vec::Vec;

use super::{migrate, step_generation, Genome, IslandState, Problem, RunConfig, SimError};
use crate::rng::stream;
use crate::stats::CumulantVector;
use crate::theory::Topology;

/// Which populations to dump as genome snapshots.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotSpec {
    pub replication: usize,
    pub generations: Vec<usize>,
}

/// One replication's cumulant series.
#[derive(Debug, Clone)]
pub struct ReplicationTrajectory {
    /// generations[n][l]: plain sample cumulants at generation boundary n.
    pub generations: Vec<Vec<CumulantVector>>,
    /// Pre-selection is not observable here: migration is the generation's
    /// selection pass, so these are the boundary values at migration
    /// generations, recorded again for the post-migration ledger.
    pub migration_generations: Vec<usize>,
    /// (generation, island, genomes) dumps for the configured snapshot spec.
    pub snapshots: Vec<(usize, usize, Vec<Genome>)>,
}

/// Replication-averaged cumulant trajectory with standard errors.
#[derive(Debug, Clone)]
pub struct EmpiricalTrajectory {
    n_islands: usize,
    order: usize,
    replications: usize,
    /// mean[n][l] and stderr[n][l] over replications.
    mean: Vec<Vec<Vec<f64>>>,
    stderr: Vec<Vec<Vec<f64>>>,
    migration_generations: Vec<usize>,
    snapshots: Vec<(usize, usize, Vec<Genome>)>,
}

impl EmpiricalTrajectory {
    pub fn n_islands(&self) -> usize {
        self.n_islands
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn n_generations(&self) -> usize {
        self.mean.len() - 1
    }

    pub fn replications(&self) -> usize {
        self.replications
    }

    /// Replication-averaged kappa_i (1-based) at (generation, island).
    pub fn mean_kappa(&self, generation: usize, island: usize, i: usize) -> f64 {
        self.mean[generation][island][i - 1]
    }

    pub fn stderr_kappa(&self, generation: usize, island: usize, i: usize) -> f64 {
        self.stderr[generation][island][i - 1]
    }

    /// Island-averaged replication mean of kappa_i at a generation.
    pub fn island_mean_kappa(&self, generation: usize, i: usize) -> f64 {
        (0..self.n_islands)
            .map(|l| self.mean_kappa(generation, l, i))
            .sum::<f64>()
            / self.n_islands as f64
    }

    pub fn mean_vector(&self, generation: usize, island: usize) -> CumulantVector {
        CumulantVector::new(self.mean[generation][island].clone())
            .expect("averaged cumulants keep kappa_2 >= 0")
    }

    pub fn migration_generations(&self) -> &[usize] {
        &self.migration_generations
    }

    pub fn is_migration_generation(&self, n: usize) -> bool {
        self.migration_generations.binary_search(&n).is_ok()
    }

    pub fn snapshots(&self) -> &[(usize, usize, Vec<Genome>)] {
        &self.snapshots
    }
}

/// Run one replication: per-island streams are derived from
/// (master seed, replication, island), so the result is a pure function of
/// (config, topology, replication) regardless of scheduling.
pub fn run_replication(
    config: &RunConfig,
    topology: &Topology,
    problem: &impl Problem,
    replication: usize,
    snapshots: Option<&SnapshotSpec>,
) -> Result<ReplicationTrajectory, SimError> {
    let n_islands = topology.n_islands();
    let mut islands: Vec<IslandState> = (0..n_islands)
        .map(|l| {
            IslandState::random(
                l,
                config.island_population,
                problem,
                stream(config.master_seed, &[replication as u64, l as u64]),
            )
        })
        .collect();

    let record = |islands: &[IslandState],
                  out: &mut Vec<Vec<CumulantVector>>|
     -> Result<(), SimError> {
        let row = islands
            .iter()
            .map(|i| i.cumulants(config.cumulant_order))
            .collect::<Result<Vec<_>, _>>()?;
        out.push(row);
        Ok(())
    };

    let want_snapshot = |gen: usize| {
        snapshots
            .map(|s| s.replication == replication && s.generations.contains(&gen))
            .unwrap_or(false)
    };
    let take_snapshot = |islands: &[IslandState], gen: usize, sink: &mut Vec<_>| {
        for island in islands {
            let genomes: Vec<Genome> =
                island.population.iter().map(|i| i.genome.clone()).collect();
            sink.push((gen, island.id, genomes));
        }
    };

    let mut generations = Vec::with_capacity(config.n_generations + 1);
    let mut migration_generations = Vec::new();
    let mut snaps = Vec::new();
    record(&islands, &mut generations)?;
    if want_snapshot(0) {
        take_snapshot(&islands, 0, &mut snaps);
    }

    for n in 1..=config.n_generations {
        if n % config.migration_period == 0 && config.r_mig > 0.0 && n_islands > 1 {
            migrate(&mut islands, topology, config, problem)?;
            migration_generations.push(n);
        } else {
            for island in islands.iter_mut() {
                step_generation(island, config, problem)?;
            }
        }
        record(&islands, &mut generations)?;
        if want_snapshot(n) {
            take_snapshot(&islands, n, &mut snaps);
        }
    }

    Ok(ReplicationTrajectory {
        generations,
        migration_generations,
        snapshots: snaps,
    })
}

/// Welford-average replication trajectories, in the order given. The fold is
/// sequential and index-ordered, so any parallel producer that preserves
/// replication order reproduces identical bytes.
pub fn aggregate_replications(
    replications: Vec<ReplicationTrajectory>,
) -> Result<EmpiricalTrajectory, SimError> {
    let count = replications.len();
    assert!(count > 0, "at least one replication");
    let n_gens = replications[0].generations.len();
    let n_islands = replications[0].generations[0].len();
    let order = replications[0].generations[0][0].order();
    let migration_generations = replications[0].migration_generations.clone();

    let mut mean = alloc::vec![alloc::vec![alloc::vec![0.0; order]; n_islands]; n_gens];
    let mut m2 = alloc::vec![alloc::vec![alloc::vec![0.0; order]; n_islands]; n_gens];
    let mut snapshots = Vec::new();
    for (r, rep) in replications.into_iter().enumerate() {
        let k = (r + 1) as f64;
        for (n, row) in rep.generations.iter().enumerate() {
            for (l, kappa) in row.iter().enumerate() {
                for (i, &v) in kappa.values().iter().enumerate() {
                    let delta = v - mean[n][l][i];
                    mean[n][l][i] += delta / k;
                    m2[n][l][i] += delta * (v - mean[n][l][i]);
                }
            }
        }
        snapshots.extend(rep.snapshots);
    }
    let stderr = if count > 1 {
        let denom = (count as f64 - 1.0) * count as f64;
        m2.iter()
            .map(|row| {
                row.iter()
                    .map(|isl| isl.iter().map(|&s| libm::sqrt(s / denom)).collect())
                    .collect()
            })
            .collect()
    } else {
        mean.iter()
            .map(|row| row.iter().map(|isl| alloc::vec![0.0; isl.len()]).collect())
            .collect()
    };

    Ok(EmpiricalTrajectory {
        n_islands,
        order,
        replications: count,
        mean,
        stderr,
        migration_generations,
        snapshots,
    })
}

/// Full experiment: all replications sequentially, then aggregation.
pub fn run_experiment(
    config: &RunConfig,
    topology: &Topology,
    problem: &impl Problem,
    snapshots: Option<&SnapshotSpec>,
) -> Result<EmpiricalTrajectory, SimError> {
    config.validate()?;
    let mut reps = Vec::with_capacity(config.replications);
    for r in 0..config.replications {
        reps.push(run_replication(config, topology, problem, r, snapshots)?);
    }
    aggregate_replications(reps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::Paramagnet;

    fn config() -> RunConfig {
        RunConfig {
            island_population: 50,
            n_generations: 12,
            migration_period: 5,
            r_mig: 0.2,
            r_cross: 0.0,
            r_mut: 0.0,
            beta: 0.005,
            master_seed: 77,
            replications: 3,
            cumulant_order: 4,
        }
    }

    #[test]
    fn determinism_per_replication() {
        let problem = Paramagnet::new(20);
        let topo = Topology::directed_ring(2);
        let a = run_replication(&config(), &topo, &problem, 1, None).unwrap();
        let b = run_replication(&config(), &topo, &problem, 1, None).unwrap();
        for (ra, rb) in a.generations.iter().zip(&b.generations) {
            assert_eq!(ra, rb);
        }
    }

    #[test]
    fn replications_differ() {
        let problem = Paramagnet::new(20);
        let topo = Topology::directed_ring(2);
        let a = run_replication(&config(), &topo, &problem, 0, None).unwrap();
        let b = run_replication(&config(), &topo, &problem, 1, None).unwrap();
        assert_ne!(a.generations[1], b.generations[1]);
    }

    #[test]
    fn trajectory_shape_and_migration_marks() {
        let problem = Paramagnet::new(20);
        let topo = Topology::directed_ring(2);
        let traj = run_experiment(&config(), &topo, &problem, None).unwrap();
        assert_eq!(traj.n_generations(), 12);
        assert_eq!(traj.n_islands(), 2);
        assert_eq!(traj.migration_generations(), &[5, 10]);
        assert!(traj.is_migration_generation(5));
        assert!(!traj.is_migration_generation(6));
    }

    #[test]
    fn initial_cumulants_match_binomial_genome_statistics() {
        // kappa_1 ~ 0, kappa_2 ~ L for L independent +-1 spins
        let problem = Paramagnet::new(20);
        let topo = Topology::singleton();
        let mut cfg = config();
        cfg.replications = 400;
        cfg.n_generations = 0;
        cfg.r_mig = 0.0;
        let traj = run_experiment(&cfg, &topo, &problem, None).unwrap();
        let k1 = traj.mean_kappa(0, 0, 1);
        let k2 = traj.mean_kappa(0, 0, 2);
        assert!(k1.abs() < 0.2, "kappa_1 = {k1}");
        // plain estimator bias: E[k2] = (1 - 1/N_P) * 20
        let expect = 20.0 * (1.0 - 1.0 / 50.0);
        assert!((k2 - expect).abs() < 0.5, "kappa_2 = {k2}, expected ~{expect}");
    }

    #[test]
    fn snapshots_only_for_requested_replication() {
        let problem = Paramagnet::new(20);
        let topo = Topology::directed_ring(2);
        let spec = SnapshotSpec {
            replication: 1,
            generations: alloc::vec![0, 5],
        };
        let a = run_replication(&config(), &topo, &problem, 0, Some(&spec)).unwrap();
        assert!(a.snapshots.is_empty());
        let b = run_replication(&config(), &topo, &problem, 1, Some(&spec)).unwrap();
        // 2 islands x 2 generations
        assert_eq!(b.snapshots.len(), 4);
        assert_eq!(b.snapshots[0].2.len(), 50);
    }

    #[test]
    fn aggregation_matches_sequential_experiment() {
        let problem = Paramagnet::new(20);
        let topo = Topology::directed_ring(2);
        let cfg = config();
        let reps: Vec<_> = (0..cfg.replications)
            .map(|r| run_replication(&cfg, &topo, &problem, r, None).unwrap())
            .collect();
        let a = aggregate_replications(reps).unwrap();
        let b = run_experiment(&cfg, &topo, &problem, None).unwrap();
        for n in 0..=cfg.n_generations {
            for l in 0..2 {
                for i in 1..=4 {
                    assert_eq!(a.mean_kappa(n, l, i), b.mean_kappa(n, l, i));
                    assert_eq!(a.stderr_kappa(n, l, i), b.stderr_kappa(n, l, i));
                }
            }
        }
    }

    #[test]
    fn config_validation_names_fields() {
        let mut cfg = config();
        cfg.r_mig = 1.5;
        match cfg.validate() {
            Err(SimError::InvalidConfig { field, .. }) => assert_eq!(field, "r_mig"),
            other => panic!("expected config error, got {other:?}"),
        }
        let mut cfg = config();
        cfg.island_population = 1;
        assert!(matches!(
            cfg.validate(),
            Err(SimError::InvalidConfig {
                field: "island_population",
                ..
            })
        ));
    }
}
