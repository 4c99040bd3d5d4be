use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mpga_cli::commands::{compare_cmd, ising, klgraph, simulate, theory};
use mpga_cli::AppError;
use mpga_core::klgraph::GraphSource;

/// Multipopulation genetic algorithm simulator, cumulant-dynamics predictor,
/// KL dissimilarity graphs and the Ising thermalization hybrid.
#[derive(Parser)]
#[command(name = "mpga", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Predict per-island cumulant trajectories analytically.
    Theory {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "out/theory")]
        out_dir: PathBuf,
        #[arg(long, default_value_t = default_workers())]
        workers: usize,
    },
    /// Run the island-model genetic algorithm and record empirical cumulants.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "out/simulate")]
        out_dir: PathBuf,
        #[arg(long, default_value_t = default_workers())]
        workers: usize,
    },
    /// Export the pairwise divergence graph at one generation.
    Klgraph {
        /// Trajectory CSV holding the cumulants (theory or empirical).
        #[arg(long, conflicts_with = "snapshots")]
        trajectory: Option<PathBuf>,
        /// Genome snapshot files, one per island, in island order.
        #[arg(long, num_args = 1..)]
        snapshots: Vec<PathBuf>,
        /// Genome length for snapshot fitness evaluation.
        #[arg(long)]
        problem_length: Option<usize>,
        #[arg(long)]
        generation: usize,
        /// Which series the cumulants came from: theoretical or empirical.
        #[arg(long)]
        source: String,
        #[arg(long)]
        topology: PathBuf,
        #[arg(long, default_value = "out/klgraph/graph")]
        out_prefix: PathBuf,
        #[arg(long, default_value_t = 4)]
        cumulant_order: usize,
    },
    /// Ising thermodynamics: one series, or the error-vs-budget comparison.
    Ising {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "out/ising")]
        out_dir: PathBuf,
        #[arg(long, default_value_t = default_workers())]
        workers: usize,
    },
    /// Theory-vs-empirical relative errors with migration-spike masking.
    Compare {
        #[arg(long)]
        theory: PathBuf,
        #[arg(long)]
        empirical: PathBuf,
        /// Generations masked on each side of every migration event.
        #[arg(long, default_value_t = 2)]
        spike_window: usize,
        #[arg(long, default_value = "out/compare")]
        out_dir: PathBuf,
    },
}

fn default_workers() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

fn dispatch(cli: Cli) -> Result<(), AppError> {
    match cli.command {
        Command::Theory {
            config,
            out_dir,
            workers,
        } => theory::run(&config, &out_dir, workers),
        Command::Simulate {
            config,
            out_dir,
            workers,
        } => simulate::run(&config, &out_dir, workers),
        Command::Klgraph {
            trajectory,
            snapshots,
            problem_length,
            generation,
            source,
            topology,
            out_prefix,
            cumulant_order,
        } => {
            let source = match source.as_str() {
                "theoretical" => GraphSource::Theoretical,
                "empirical" => GraphSource::Empirical,
                other => {
                    return Err(AppError::config(format!(
                        "source must be theoretical or empirical, got '{other}'"
                    )))
                }
            };
            klgraph::run(&klgraph::KlGraphArgs {
                trajectory,
                snapshots,
                problem_length,
                generation,
                source,
                topology,
                out_prefix,
                cumulant_order,
            })
        }
        Command::Ising {
            config,
            out_dir,
            workers,
        } => ising::run(&config, &out_dir, workers),
        Command::Compare {
            theory,
            empirical,
            spike_window,
            out_dir,
        } => compare_cmd::run(&theory, &empirical, spike_window, &out_dir),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mpga: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
