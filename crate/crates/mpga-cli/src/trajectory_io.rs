//! Trajectory CSV formats.
//!
//! Theory:    `generation,island,k1..kK,migrated`
//! Empirical: `generation,island,k1..kK,se_k1..se_kK,migrated`
//!
//! Both start with a '#' comment line naming the format version; numeric
//! columns carry nine significant digits.

use std::path::Path;

use mpga_core::sim::EmpiricalTrajectory;
use mpga_core::stats::CumulantVector;
use mpga_core::theory::TheoryTrajectory;

use crate::format::sig9;
use crate::AppError;

pub fn theory_csv(trajectory: &TheoryTrajectory) -> String {
    let order = trajectory.at(0, 0).order();
    let mut out = String::from("# mpga theory trajectory v1\n");
    out.push_str("generation,island");
    for i in 1..=order {
        out.push_str(&format!(",k{i}"));
    }
    out.push_str(",migrated\n");
    for n in 0..=trajectory.n_generations() {
        let migrated = trajectory.is_migration_generation(n);
        for l in 0..trajectory.n_islands() {
            out.push_str(&format!("{n},{l}"));
            for i in 1..=order {
                out.push(',');
                out.push_str(&sig9(trajectory.at(n, l).kappa(i)));
            }
            out.push_str(if migrated { ",1\n" } else { ",0\n" });
        }
    }
    out
}

pub fn empirical_csv(trajectory: &EmpiricalTrajectory) -> String {
    let order = trajectory.order();
    let mut out = String::from("# mpga empirical trajectory v1\n");
    out.push_str("generation,island");
    for i in 1..=order {
        out.push_str(&format!(",k{i}"));
    }
    for i in 1..=order {
        out.push_str(&format!(",se_k{i}"));
    }
    out.push_str(",migrated\n");
    for n in 0..=trajectory.n_generations() {
        let migrated = trajectory.is_migration_generation(n);
        for l in 0..trajectory.n_islands() {
            out.push_str(&format!("{n},{l}"));
            for i in 1..=order {
                out.push(',');
                out.push_str(&sig9(trajectory.mean_kappa(n, l, i)));
            }
            for i in 1..=order {
                out.push(',');
                out.push_str(&sig9(trajectory.stderr_kappa(n, l, i)));
            }
            out.push_str(if migrated { ",1\n" } else { ",0\n" });
        }
    }
    out
}

/// Parsed trajectory rows shared by `compare` and `klgraph`.
#[derive(Debug, Clone)]
pub struct TrajectoryTable {
    pub order: usize,
    pub n_islands: usize,
    pub n_generations: usize,
    /// kappa[generation][island] (means for empirical files).
    pub kappa: Vec<Vec<Vec<f64>>>,
    pub migration_generations: Vec<usize>,
}

impl TrajectoryTable {
    pub fn vector(&self, generation: usize, island: usize) -> Result<CumulantVector, AppError> {
        CumulantVector::new(self.kappa[generation][island].clone()).map_err(AppError::from)
    }
}

pub fn read_trajectory(path: &Path) -> Result<TrajectoryTable, AppError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| AppError::Io(format!("{}: {e}", path.display())))?;
    parse_trajectory(&text).map_err(|m| AppError::config(format!("{}: {m}", path.display())))
}

pub fn parse_trajectory(text: &str) -> Result<TrajectoryTable, String> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or("missing header")?;
    let columns: Vec<&str> = header.split(',').collect();
    if columns.first() != Some(&"generation") || columns.get(1) != Some(&"island") {
        return Err("header must start with generation,island".into());
    }
    let order = columns
        .iter()
        .filter(|c| c.starts_with('k') && c[1..].chars().all(|ch| ch.is_ascii_digit()))
        .count();
    if order < 2 {
        return Err("no cumulant columns found".into());
    }
    let migrated_col = columns
        .iter()
        .position(|c| *c == "migrated")
        .ok_or("missing migrated column")?;

    let mut rows: Vec<(usize, usize, Vec<f64>, bool)> = Vec::new();
    for (idx, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != columns.len() {
            return Err(format!("row {}: {} fields, expected {}", idx + 1, fields.len(), columns.len()));
        }
        let generation: usize = fields[0].parse().map_err(|_| format!("row {}: bad generation", idx + 1))?;
        let island: usize = fields[1].parse().map_err(|_| format!("row {}: bad island", idx + 1))?;
        let mut kappa = Vec::with_capacity(order);
        for i in 0..order {
            let v: f64 = fields[2 + i]
                .parse()
                .map_err(|_| format!("row {}: bad k{}", idx + 1, i + 1))?;
            kappa.push(v);
        }
        let migrated = fields[migrated_col] == "1";
        rows.push((generation, island, kappa, migrated));
    }
    if rows.is_empty() {
        return Err("no data rows".into());
    }
    let n_islands = rows.iter().map(|r| r.1).max().unwrap() + 1;
    let n_generations = rows.iter().map(|r| r.0).max().unwrap();
    let mut kappa = vec![vec![Vec::new(); n_islands]; n_generations + 1];
    let mut migration_generations = Vec::new();
    for (generation, island, k, migrated) in rows {
        kappa[generation][island] = k;
        if migrated && !migration_generations.contains(&generation) {
            migration_generations.push(generation);
        }
    }
    for (n, row) in kappa.iter().enumerate() {
        for (l, k) in row.iter().enumerate() {
            if k.is_empty() {
                return Err(format!("missing row for generation {n}, island {l}"));
            }
        }
    }
    migration_generations.sort_unstable();
    Ok(TrajectoryTable {
        order,
        n_islands,
        n_generations,
        kappa,
        migration_generations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_rejects_ragged_rows() {
        let text = "generation,island,k1,k2,migrated\n0,0,1.0,2.0,0\n1,0,1.0,0\n";
        assert!(parse_trajectory(text).is_err());
    }

    #[test]
    fn parse_reads_migration_marks() {
        let text = "# c\ngeneration,island,k1,k2,migrated\n0,0,0.0,1.0,0\n1,0,0.1,0.9,1\n";
        let table = parse_trajectory(text).unwrap();
        assert_eq!(table.order, 2);
        assert_eq!(table.migration_generations, vec![1]);
        assert_eq!(table.kappa[1][0], vec![0.1, 0.9]);
    }
}
