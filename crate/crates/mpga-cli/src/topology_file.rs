//! Topology files: either whitespace-separated 0/1 adjacency rows, or an edge
//! list with one "src dst" pair per line (zero-based indices, node count
//! inferred from the largest index). Lines starting with '#' are comments.

use std::path::Path;

use mpga_core::theory::Topology;

use crate::AppError;

pub fn load_topology(path: &Path) -> Result<Topology, AppError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| AppError::Io(format!("{}: {e}", path.display())))?;
    parse_topology(&text).map_err(|m| AppError::config(format!("{}: {m}", path.display())))
}

pub fn parse_topology(text: &str) -> Result<Topology, String> {
    let rows: Vec<Vec<&str>> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.split_whitespace().collect())
        .collect();
    if rows.is_empty() {
        return Err("topology file has no data lines".into());
    }
    // square all-0/1 grids are adjacency matrices and take precedence over
    // the edge-list reading
    let looks_like_matrix = rows
        .iter()
        .all(|r| r.iter().all(|t| *t == "0" || *t == "1"));
    if looks_like_matrix && rows.iter().all(|r| r.len() == rows.len()) {
        let matrix: Vec<Vec<f64>> = rows
            .iter()
            .map(|r| r.iter().map(|t| if *t == "1" { 1.0 } else { 0.0 }).collect())
            .collect();
        return Topology::from_adjacency(&matrix).map_err(|e| e.to_string());
    }
    if rows.iter().all(|r| r.len() == 2) {
        let mut edges = Vec::with_capacity(rows.len());
        let mut max_node = 0usize;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != 2 {
                return Err(format!("line {}: expected 'src dst'", i + 1));
            }
            let src: usize = row[0]
                .parse()
                .map_err(|_| format!("line {}: bad source index '{}'", i + 1, row[0]))?;
            let dst: usize = row[1]
                .parse()
                .map_err(|_| format!("line {}: bad destination index '{}'", i + 1, row[1]))?;
            max_node = max_node.max(src).max(dst);
            edges.push((src, dst));
        }
        return Ok(Topology::from_edges(max_node + 1, &edges));
    }
    Err("not a square 0/1 matrix nor an edge list".into())
}

/// Serialize as an adjacency matrix file.
pub fn topology_to_matrix_text(topology: &Topology) -> String {
    let n = topology.n_islands();
    let mut out = String::new();
    for i in 0..n {
        let row: Vec<&str> = (0..n)
            .map(|j| if topology.edge(i, j) { "1" } else { "0" })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}
