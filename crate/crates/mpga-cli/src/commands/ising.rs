use std::path::Path;

use mpga_core::ising::{mpga_mh_run, plain_mh_thermo, CrossoverKind, HybridConfig, HybridMode, Thermo};
use mpga_core::theory::Topology;
use rayon::prelude::*;

use crate::config::{load_config, resolve_path, IsingConfig, IsingMode};
use crate::format::sig9;
use crate::manifest::ManifestBuilder;
use crate::topology_file::load_topology;
use crate::AppError;

/// Stream-tag namespaces so no two runs share a random stream.
const TAG_MPGA: u64 = 1;
const TAG_MH: u64 = 2;
const TAG_REFERENCE: u64 = 3;

/// Measurement generations per standard-error batch in hybrid runs.
const HYBRID_BATCH: usize = 10;
/// Sweeps per batch in the long-Metropolis reference.
const REFERENCE_BATCH: usize = 1000;

pub fn run(config_path: &Path, out_dir: &Path, workers: usize) -> Result<(), AppError> {
    let mut config: IsingConfig = load_config(config_path)?;
    config.validate()?;
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
    let temperatures = config.temperatures.values()?;

    std::fs::create_dir_all(out_dir)?;
    let mut manifest = ManifestBuilder::new("ising", config.seed, workers, config.clone());
    let pool = crate::thread_pool(workers)?;

    if config.budgets.is_some() {
        budget_pipeline(&config, &topology, &temperatures, &pool, &mut manifest, out_dir)?;
    } else {
        let mode = match config.mode {
            IsingMode::Mpga => HybridMode::Mpga,
            IsingMode::Mh => HybridMode::PlainMh,
        };
        let method_tag = method_tag(mode);
        let series = run_series(
            &config,
            &topology,
            &temperatures,
            mode,
            config.generations,
            method_tag,
            &pool,
        )?;
        let name = format!("thermo_{}.csv", mode_name(mode));
        manifest.write_output(
            &out_dir.join(name),
            &thermo_csv(&series, config.generations, config.therm_cutoff),
        )?;
    }
    manifest.record_timing("runs");
    manifest.finish(out_dir)
}

fn crossover_kind(config: &IsingConfig) -> CrossoverKind {
    match config.crossover_kind {
        crate::config::CrossoverKindSpec::Patch => CrossoverKind::PatchSwap,
        crate::config::CrossoverKindSpec::Uniform => CrossoverKind::Uniform,
    }
}

fn mode_name(mode: HybridMode) -> &'static str {
    match mode {
        HybridMode::Mpga => "mpga",
        HybridMode::PlainMh => "mh",
    }
}

fn method_tag(mode: HybridMode) -> u64 {
    match mode {
        HybridMode::Mpga => TAG_MPGA,
        HybridMode::PlainMh => TAG_MH,
    }
}

/// One thermodynamic series: per temperature, `experiments` independent runs
/// averaged; standard errors across experiments when there are several,
/// otherwise the run's batch-means errors.
fn run_series(
    config: &IsingConfig,
    topology: &Topology,
    temperatures: &[f64],
    mode: HybridMode,
    n_generations: usize,
    method_tag: u64,
    pool: &rayon::ThreadPool,
) -> Result<Vec<Thermo>, AppError> {
    let hybrid = HybridConfig {
        lattice_size: config.lattice,
        n_islands: config.islands,
        island_population: config.population,
        n_generations,
        therm_cutoff: config.therm_cutoff,
        migration_period: config.migration_period,
        r_mig: config.migration_rate,
        r_cross: config.crossover_rate,
        crossover_kind: crossover_kind(config),
        mode,
        master_seed: config.seed,
        generations_per_batch: HYBRID_BATCH,
    };
    let jobs: Vec<(usize, usize)> = (0..temperatures.len())
        .flat_map(|t| (0..config.experiments).map(move |e| (t, e)))
        .collect();
    let results: Result<Vec<Thermo>, AppError> = pool.install(|| {
        jobs.par_iter()
            .map(|&(t_index, experiment)| {
                mpga_mh_run(
                    &hybrid,
                    topology,
                    temperatures[t_index],
                    &[
                        method_tag,
                        n_generations as u64,
                        experiment as u64,
                        t_index as u64,
                    ],
                )
                .map_err(AppError::from)
            })
            .collect()
    });
    let results = results?;
    let mut series = Vec::with_capacity(temperatures.len());
    for (t_index, &t) in temperatures.iter().enumerate() {
        let runs = &results[t_index * config.experiments..(t_index + 1) * config.experiments];
        series.push(average_thermo(t, runs));
    }
    Ok(series)
}

/// Average per-experiment estimates; with several experiments the scatter
/// across them replaces the within-run batch errors.
fn average_thermo(t: f64, runs: &[Thermo]) -> Thermo {
    let n = runs.len() as f64;
    let mean = |f: fn(&Thermo) -> f64| runs.iter().map(f).sum::<f64>() / n;
    let se = |f: fn(&Thermo) -> f64, fallback: fn(&Thermo) -> f64| {
        if runs.len() > 1 {
            let m = mean(f);
            let var = runs.iter().map(|r| (f(r) - m) * (f(r) - m)).sum::<f64>() / (n - 1.0);
            (var / n).sqrt()
        } else {
            fallback(runs.first().expect("non-empty"))
        }
    };
    Thermo {
        t,
        e_mean: mean(|r| r.e_mean),
        e_stderr: se(|r| r.e_mean, |r| r.e_stderr),
        c_h: mean(|r| r.c_h),
        c_h_stderr: se(|r| r.c_h, |r| r.c_h_stderr),
        m_mean: mean(|r| r.m_mean),
        m_stderr: se(|r| r.m_mean, |r| r.m_stderr),
        m_abs_mean: mean(|r| r.m_abs_mean),
        m_abs_stderr: se(|r| r.m_abs_mean, |r| r.m_abs_stderr),
        chi: mean(|r| r.chi),
        chi_stderr: se(|r| r.chi, |r| r.chi_stderr),
    }
}

/// The thermalization benefit comparison: both methods at every budget
/// against a long-Metropolis reference; per-experiment mean absolute errors
/// over the temperature grid, averaged over experiments.
fn budget_pipeline(
    config: &IsingConfig,
    topology: &Topology,
    temperatures: &[f64],
    pool: &rayon::ThreadPool,
    manifest: &mut ManifestBuilder<IsingConfig>,
    out_dir: &Path,
) -> Result<(), AppError> {
    let budgets = config.budgets.clone().expect("validated");
    let reference_spec = config.reference.clone().expect("validated");

    let reference: Result<Vec<Thermo>, AppError> = pool.install(|| {
        (0..temperatures.len())
            .into_par_iter()
            .map(|t_index| {
                plain_mh_thermo(
                    config.lattice,
                    temperatures[t_index],
                    reference_spec.therm_sweeps,
                    reference_spec.measure_sweeps,
                    config.seed,
                    &[TAG_REFERENCE, t_index as u64],
                    REFERENCE_BATCH,
                )
                .map_err(AppError::from)
            })
            .collect()
    });
    let reference = reference?;
    manifest.write_output(
        &out_dir.join("thermo_reference.csv"),
        &thermo_csv(&reference, reference_spec.measure_sweeps, reference_spec.therm_sweeps),
    )?;

    let mut budget_rows = String::from("# mpga ising error vs budget v1\n");
    budget_rows.push_str("n_generations,mae_ch,mae_chi,method\n");
    for mode in [HybridMode::Mpga, HybridMode::PlainMh] {
        for &budget in &budgets {
            // per-experiment estimates for the MAE average
            let hybrid = HybridConfig {
                lattice_size: config.lattice,
                n_islands: config.islands,
                island_population: config.population,
                n_generations: budget,
                therm_cutoff: config.therm_cutoff,
                migration_period: config.migration_period,
                r_mig: config.migration_rate,
                r_cross: config.crossover_rate,
                crossover_kind: crossover_kind(config),
                mode,
                master_seed: config.seed,
                generations_per_batch: HYBRID_BATCH,
            };
            let jobs: Vec<(usize, usize)> = (0..config.experiments)
                .flat_map(|e| (0..temperatures.len()).map(move |t| (e, t)))
                .collect();
            let results: Result<Vec<Thermo>, AppError> = pool.install(|| {
                jobs.par_iter()
                    .map(|&(experiment, t_index)| {
                        mpga_mh_run(
                            &hybrid,
                            topology,
                            temperatures[t_index],
                            &[
                                method_tag(mode),
                                budget as u64,
                                experiment as u64,
                                t_index as u64,
                            ],
                        )
                        .map_err(AppError::from)
                    })
                    .collect()
            });
            let results = results?;
            let mut mae_ch = 0.0;
            let mut mae_chi = 0.0;
            for experiment in 0..config.experiments {
                let runs =
                    &results[experiment * temperatures.len()..(experiment + 1) * temperatures.len()];
                let (ch, chi) = mae_against_reference(runs, &reference);
                mae_ch += ch;
                mae_chi += chi;
            }
            mae_ch /= config.experiments as f64;
            mae_chi /= config.experiments as f64;
            budget_rows.push_str(&format!(
                "{budget},{},{},{}\n",
                sig9(mae_ch),
                sig9(mae_chi),
                mode_name(mode)
            ));

            // averaged series per (method, budget) for plotting
            let mut series = Vec::with_capacity(temperatures.len());
            for (t_index, &t) in temperatures.iter().enumerate() {
                let runs: Vec<Thermo> = (0..config.experiments)
                    .map(|e| results[e * temperatures.len() + t_index])
                    .collect();
                series.push(average_thermo(t, &runs));
            }
            manifest.write_output(
                &out_dir.join(format!("thermo_{}_{budget}.csv", mode_name(mode))),
                &thermo_csv(&series, budget, config.therm_cutoff),
            )?;
        }
    }
    manifest.write_output(&out_dir.join("error_vs_budget.csv"), &budget_rows)
}

fn mae_against_reference(runs: &[Thermo], reference: &[Thermo]) -> (f64, f64) {
    let n = runs.len() as f64;
    let mut ch = 0.0;
    let mut chi = 0.0;
    for (run, truth) in runs.iter().zip(reference) {
        ch += (run.c_h - truth.c_h).abs();
        chi += (run.chi - truth.chi).abs();
    }
    (ch / n, chi / n)
}

pub fn thermo_csv(series: &[Thermo], n_generations: usize, therm_cutoff: usize) -> String {
    let mut out = String::from("# mpga thermo series v1\n");
    out.push_str("T,e_mean,e_stderr,c_h,m_mean,m_stderr,chi,n_generations,therm_cutoff,mh_steps\n");
    for thermo in series {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{n_generations},{therm_cutoff},{}\n",
            sig9(thermo.t),
            sig9(thermo.e_mean),
            sig9(thermo.e_stderr),
            sig9(thermo.c_h),
            sig9(thermo.m_mean),
            sig9(thermo.m_stderr),
            sig9(thermo.chi),
            n_generations - therm_cutoff
        ));
    }
    out
}

/// (T, e_mean, c_h, m_mean, chi) rows of a thermo CSV.
pub type ThermoRow = (f64, f64, f64, f64, f64);

/// Parse a thermo CSV back (for tests and the acceptance suite).
pub fn parse_thermo_csv(text: &str) -> Result<Vec<ThermoRow>, AppError> {
    let mut out = Vec::new();
    for line in text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#') && !l.starts_with('T'))
    {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() < 7 {
            return Err(AppError::config("thermo row too short".to_string()));
        }
        let parse = |s: &str| -> Result<f64, AppError> {
            s.parse()
                .map_err(|_| AppError::config(format!("bad thermo value '{s}'")))
        };
        out.push((
            parse(fields[0])?,
            parse(fields[1])?,
            parse(fields[3])?,
            parse(fields[4])?,
            parse(fields[6])?,
        ));
    }
    Ok(out)
}
