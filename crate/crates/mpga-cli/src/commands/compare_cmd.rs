use std::path::Path;

use crate::compare::{compare, report_csv};
use crate::manifest::ManifestBuilder;
use crate::trajectory_io::read_trajectory;
use crate::AppError;

/// Compare a theory trajectory against an empirical one: writes `report.csv`
/// (per-generation relative errors with mask flags) and `summary.json`.
pub fn run(
    theory_path: &Path,
    empirical_path: &Path,
    spike_window: usize,
    out_dir: &Path,
) -> Result<(), AppError> {
    let theory = read_trajectory(theory_path)?;
    let empirical = read_trajectory(empirical_path)?;
    let report = compare(&theory, &empirical, spike_window)?;

    std::fs::create_dir_all(out_dir)?;
    let mut manifest = ManifestBuilder::new(
        "compare",
        0,
        1,
        serde_json::json!({
            "theory": theory_path.display().to_string(),
            "empirical": empirical_path.display().to_string(),
            "spike_window": spike_window,
        }),
    );
    manifest.write_output(&out_dir.join("report.csv"), &report_csv(&report))?;
    let summary = serde_json::to_string_pretty(&report).map_err(|e| AppError::Io(e.to_string()))?;
    manifest.write_output(&out_dir.join("summary.json"), &summary)?;
    manifest.finish(out_dir)
}
