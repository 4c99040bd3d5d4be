//! Run manifests: config echo, seed, version, content hashes of every output
//! file and wall-clock timings. Re-running a command with its manifest as the
//! config reproduces byte-identical outputs (the hashes match; timings are
//! run metadata and naturally differ).

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::AppError;

#[derive(Debug, Serialize)]
pub struct Manifest<C: Serialize> {
    pub command: &'static str,
    pub version: &'static str,
    pub seed: u64,
    pub workers: usize,
    pub config: C,
    /// file name -> sha256 of the raw bytes
    pub outputs: BTreeMap<String, String>,
    pub timings_ms: BTreeMap<String, u128>,
}

pub struct ManifestBuilder<C: Serialize> {
    manifest: Manifest<C>,
    started: Instant,
}

impl<C: Serialize> ManifestBuilder<C> {
    pub fn new(command: &'static str, seed: u64, workers: usize, config: C) -> Self {
        Self {
            manifest: Manifest {
                command,
                version: env!("CARGO_PKG_VERSION"),
                seed,
                workers,
                config,
                outputs: BTreeMap::new(),
                timings_ms: BTreeMap::new(),
            },
            started: Instant::now(),
        }
    }

    /// Write an output file and record its content hash.
    pub fn write_output(&mut self, path: &Path, contents: &str) -> Result<(), AppError> {
        std::fs::write(path, contents)
            .map_err(|e| AppError::Io(format!("{}: {e}", path.display())))?;
        let digest = Sha256::digest(contents.as_bytes());
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        self.manifest
            .outputs
            .insert(name, format!("sha256:{digest:x}"));
        Ok(())
    }

    pub fn record_timing(&mut self, label: &str) {
        self.manifest
            .timings_ms
            .insert(label.to_string(), self.started.elapsed().as_millis());
    }

    /// Finish: record total time and write `manifest.json` next to the
    /// outputs.
    pub fn finish(mut self, out_dir: &Path) -> Result<(), AppError> {
        self.record_timing("total");
        let path = out_dir.join("manifest.json");
        let body = serde_json::to_string_pretty(&self.manifest)
            .map_err(|e| AppError::Io(e.to_string()))?;
        std::fs::write(&path, body).map_err(|e| AppError::Io(format!("{}: {e}", path.display())))
    }
}

/// sha256 of a file on disk, for output comparisons.
pub fn hash_file(path: &Path) -> Result<String, AppError> {
    let bytes = std::fs::read(path).map_err(|e| AppError::Io(format!("{}: {e}", path.display())))?;
    Ok(format!("sha256:{:x}", Sha256::digest(&bytes)))
}
