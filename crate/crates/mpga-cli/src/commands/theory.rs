use std::path::Path;

use mpga_core::stats::CumulantVector;
use mpga_core::theory::{predict_trajectory, BackgroundDistribution, TheoryParams};

use crate::config::{load_config, resolve_path, InitialSpec, TheoryConfig};
use crate::manifest::ManifestBuilder;
use crate::topology_file::load_topology;
use crate::trajectory_io::{read_trajectory, theory_csv};
use crate::AppError;

/// Predict the cumulant trajectory and write `theory.csv` under `out_dir`.
pub fn run(config_path: &Path, out_dir: &Path, workers: usize) -> Result<(), AppError> {
    let mut config: TheoryConfig = load_config(config_path)?;
    // absolutize echoed paths so a rerun from the manifest resolves them
    config.topology = resolve_path(config_path, &config.topology);
    if let InitialSpec::FromEmpirical(path) = &config.initial {
        config.initial = InitialSpec::FromEmpirical(resolve_path(config_path, path));
    }
    let topology = load_topology(&config.topology)?;
    let order = config.cumulant_order;
    if order < 2 {
        return Err(AppError::config("cumulant_order must be >= 2"));
    }
    if config.population < 2 {
        return Err(AppError::config("population must be >= 2"));
    }

    let initial: Vec<CumulantVector> = match &config.initial {
        InitialSpec::Cumulants(rows) => rows
            .iter()
            .map(|row| {
                CumulantVector::new(row.clone())
                    .map_err(|e| AppError::config(format!("initial.cumulants: {e}")))
                    .and_then(|k| k.resized(order).map_err(AppError::from))
            })
            .collect::<Result<_, _>>()?,
        InitialSpec::FromEmpirical(path) => {
            let table = read_trajectory(path)?;
            (0..table.n_islands)
                .map(|l| table.vector(0, l).and_then(|k| k.resized(order).map_err(AppError::from)))
                .collect::<Result<_, _>>()?
        }
    };
    if initial.len() != topology.n_islands() {
        return Err(AppError::config(format!(
            "{} initial vectors for a {}-island topology",
            initial.len(),
            topology.n_islands()
        )));
    }

    let params = TheoryParams {
        beta: config.beta,
        n_pop: config.population,
        n_generations: config.generations,
        migration_period: config.migration_period,
        r_mig: config.migration_rate,
        background: BackgroundDistribution::new(config.background.build(order)?),
    };

    std::fs::create_dir_all(out_dir)?;
    let mut manifest = ManifestBuilder::new("theory", 0, workers, config.clone());
    let trajectory = predict_trajectory(&initial, &topology, &params)?;
    manifest.record_timing("prediction");
    manifest.write_output(&out_dir.join("theory.csv"), &theory_csv(&trajectory))?;
    manifest.finish(out_dir)
}
