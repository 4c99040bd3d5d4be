use std::path::{Path, PathBuf};

use mpga_core::klgraph::{build_kl_graph, GraphSource, KLGraph};
use mpga_core::sim::{Paramagnet, Problem};
use mpga_core::stats::{sample_cumulants, CumulantVector};

use crate::format::sig9;
use crate::manifest::ManifestBuilder;
use crate::topology_file::load_topology;
use crate::trajectory_io::read_trajectory;
use crate::AppError;

pub struct KlGraphArgs {
    /// Cumulants from a trajectory CSV at --generation ...
    pub trajectory: Option<PathBuf>,
    /// ... or from genome snapshot files, one per island, in island order.
    pub snapshots: Vec<PathBuf>,
    pub problem_length: Option<usize>,
    pub generation: usize,
    pub source: GraphSource,
    pub topology: PathBuf,
    pub out_prefix: PathBuf,
    pub cumulant_order: usize,
}

/// Build the dissimilarity graph and export four files:
/// `<prefix>.corrected.{csv,dot}` with the Gram-Charlier-corrected weights
/// and `<prefix>.gaussian.{csv,dot}` with the Gaussian-only weights.
pub fn run(args: &KlGraphArgs) -> Result<(), AppError> {
    let topology = load_topology(&args.topology)?;
    let kappa_all: Vec<CumulantVector> = if let Some(path) = &args.trajectory {
        let table = read_trajectory(path)?;
        if args.generation > table.n_generations {
            return Err(AppError::config(format!(
                "generation {} beyond trajectory length {}",
                args.generation, table.n_generations
            )));
        }
        (0..table.n_islands)
            .map(|l| table.vector(args.generation, l))
            .collect::<Result<_, _>>()?
    } else if !args.snapshots.is_empty() {
        let length = args.problem_length.ok_or_else(|| {
            AppError::config("--problem-length is required with --snapshots")
        })?;
        let problem = Paramagnet::new(length);
        let mut kappa_all = Vec::with_capacity(args.snapshots.len());
        for path in &args.snapshots {
            let fitness = read_snapshot_fitness(path, &problem)?;
            kappa_all.push(sample_cumulants(&fitness, args.cumulant_order)?);
        }
        kappa_all
    } else {
        return Err(AppError::config(
            "either --trajectory or --snapshots is required",
        ));
    };
    if kappa_all.len() != topology.n_islands() {
        return Err(AppError::config(format!(
            "{} islands of cumulants for a {}-island topology",
            kappa_all.len(),
            topology.n_islands()
        )));
    }

    let graph = build_kl_graph(&kappa_all, &topology, args.generation, args.source);
    let out_dir = args
        .out_prefix
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or_else(|| Path::new("."))
        .to_path_buf();
    std::fs::create_dir_all(&out_dir)?;
    let stem = args.out_prefix.to_string_lossy().into_owned();
    let mut manifest = ManifestBuilder::new("klgraph", 0, 1, serde_json::json!({
        "generation": args.generation,
        "source": args.source.tag(),
        "topology": args.topology.display().to_string(),
        "cumulant_order": args.cumulant_order,
    }));
    manifest.write_output(
        Path::new(&format!("{stem}.corrected.csv")),
        &edges_csv(&graph, false),
    )?;
    manifest.write_output(
        Path::new(&format!("{stem}.corrected.dot")),
        &dot(&graph, false),
    )?;
    manifest.write_output(
        Path::new(&format!("{stem}.gaussian.csv")),
        &edges_csv(&graph, true),
    )?;
    manifest.write_output(Path::new(&format!("{stem}.gaussian.dot")), &dot(&graph, true))?;
    manifest.finish(&out_dir)
}

/// One genome per line, '+'/'-' per spin.
fn read_snapshot_fitness(path: &Path, problem: &Paramagnet) -> Result<Vec<f64>, AppError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| AppError::Io(format!("{}: {e}", path.display())))?;
    let mut fitness = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let genome: Vec<i8> = line
            .chars()
            .map(|c| match c {
                '+' => Ok(1i8),
                '-' => Ok(-1i8),
                other => Err(AppError::config(format!(
                    "{}: line {}: unexpected character '{other}'",
                    path.display(),
                    i + 1
                ))),
            })
            .collect::<Result<_, _>>()?;
        if genome.len() != problem.genome_length() {
            return Err(AppError::config(format!(
                "{}: line {}: genome length {} != {}",
                path.display(),
                i + 1,
                genome.len(),
                problem.genome_length()
            )));
        }
        fitness.push(problem.fitness(&genome));
    }
    if fitness.len() < 2 {
        return Err(AppError::config(format!(
            "{}: fewer than two genomes",
            path.display()
        )));
    }
    Ok(fitness)
}

/// Dense edge list: every ordered pair, undefined islands as nan.
pub fn edges_csv(graph: &KLGraph, gaussian_only: bool) -> String {
    let mut out = String::from("# mpga kl edge list v1\n");
    out.push_str("src,dst,weight,generation,source\n");
    for l in 0..graph.n_islands() {
        for q in 0..graph.n_islands() {
            if l == q {
                continue;
            }
            let w = if gaussian_only {
                graph.gaussian_weight(l, q)
            } else {
                graph.weight(l, q)
            };
            out.push_str(&format!(
                "{l},{q},{},{},{}\n",
                sig9(w),
                graph.generation(),
                graph.source().tag()
            ));
        }
    }
    out
}

/// DOT rendering masked to the input topology's edges.
pub fn dot(graph: &KLGraph, gaussian_only: bool) -> String {
    let mut out = String::from("digraph kl {\n");
    for l in 0..graph.n_islands() {
        out.push_str(&format!("  {l};\n"));
    }
    for l in 0..graph.n_islands() {
        for q in 0..graph.n_islands() {
            if !graph.edge(l, q) {
                continue;
            }
            let w = if gaussian_only {
                graph.gaussian_weight(l, q)
            } else {
                graph.weight(l, q)
            };
            if w.is_nan() {
                continue;
            }
            out.push_str(&format!("  {l} -> {q} [weight={}];\n", sig9(w)));
        }
    }
    out.push_str("}\n");
    out
}
