use std::path::Path;

use mpga_core::sim::{aggregate_replications, run_replication, SnapshotSpec};
use rayon::prelude::*;

use crate::config::{load_config, resolve_path, SimulateConfig};
use crate::manifest::ManifestBuilder;
use crate::topology_file::load_topology;
use crate::trajectory_io::empirical_csv;
use crate::AppError;

/// Run the MPGA experiment and write `empirical.csv` (plus optional genome
/// snapshots) under `out_dir`. Replications run on the worker pool; the
/// aggregation order is fixed by replication index, so the bytes are
/// independent of the worker count.
pub fn run(config_path: &Path, out_dir: &Path, workers: usize) -> Result<(), AppError> {
    let mut config: SimulateConfig = load_config(config_path)?;
    let run_config = config.run_config()?;
    // absolutize the echoed path so a rerun from the manifest resolves it
    config.topology = resolve_path(config_path, &config.topology);
    let topology = load_topology(&config.topology)?;
    if topology.n_islands() != config.islands {
        return Err(AppError::config(format!(
            "islands is {} but the topology has {}",
            config.islands,
            topology.n_islands()
        )));
    }
    let problem = config.problem.build()?;
    let snapshots = config.snapshots.as_ref().map(|s| SnapshotSpec {
        replication: s.replication,
        generations: s.generations.clone(),
    });

    std::fs::create_dir_all(out_dir)?;
    let mut manifest = ManifestBuilder::new("simulate", config.seed, workers, config.clone());

    let pool = crate::thread_pool(workers)?;
    let replications: Result<Vec<_>, _> = pool.install(|| {
        (0..run_config.replications)
            .into_par_iter()
            .map(|r| run_replication(&run_config, &topology, &problem, r, snapshots.as_ref()))
            .collect()
    });
    let trajectory = aggregate_replications(replications?)?;
    manifest.record_timing("simulation");

    manifest.write_output(&out_dir.join("empirical.csv"), &empirical_csv(&trajectory))?;
    for (generation, island, genomes) in trajectory.snapshots() {
        let mut body = String::new();
        for genome in genomes {
            let line: String = genome
                .iter()
                .map(|&s| if s > 0 { '+' } else { '-' })
                .collect();
            body.push_str(&line);
            body.push('\n');
        }
        let name = format!("snapshot_g{generation:04}_i{island:02}.txt");
        manifest.write_output(&out_dir.join(name), &body)?;
    }
    manifest.finish(out_dir)
}
