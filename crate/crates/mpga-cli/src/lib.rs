//! Orchestration for the MPGA experiments: config files, topology files,
//! CSV/DOT exporters, run manifests and the five command pipelines.

pub mod commands;
pub mod compare;
pub mod config;
pub mod format;
pub mod manifest;
pub mod topology_file;
pub mod trajectory_io;

use std::fmt;

/// Process exit codes: 0 success, 2 config error, 3 numerical failure,
/// 4 IO error.
#[derive(Debug)]
pub enum AppError {
    Config(String),
    Numerical(String),
    Io(String),
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Config(_) => 2,
            AppError::Numerical(_) => 3,
            AppError::Io(_) => 4,
        }
    }

    pub fn config(msg: impl Into<String>) -> Self {
        AppError::Config(msg.into())
    }
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppError::Config(m) => write!(f, "config error: {m}"),
            AppError::Numerical(m) => write!(f, "numerical failure: {m}"),
            AppError::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl std::error::Error for AppError {}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Io(e.to_string())
    }
}

impl From<mpga_core::sim::SimError> for AppError {
    fn from(e: mpga_core::sim::SimError) -> Self {
        match e {
            mpga_core::sim::SimError::InvalidConfig { .. } => AppError::Config(e.to_string()),
            other => AppError::Numerical(other.to_string()),
        }
    }
}

impl From<mpga_core::theory::TheoryError> for AppError {
    fn from(e: mpga_core::theory::TheoryError) -> Self {
        AppError::Numerical(e.to_string())
    }
}

impl From<mpga_core::klgraph::KlError> for AppError {
    fn from(e: mpga_core::klgraph::KlError) -> Self {
        AppError::Numerical(e.to_string())
    }
}

impl From<mpga_core::ising::IsingError> for AppError {
    fn from(e: mpga_core::ising::IsingError) -> Self {
        AppError::Numerical(e.to_string())
    }
}

impl From<mpga_core::stats::StatsError> for AppError {
    fn from(e: mpga_core::stats::StatsError) -> Self {
        AppError::Numerical(e.to_string())
    }
}

/// Build a rayon pool with the requested worker count. Outputs are identical
/// for any count: parallel maps collect in index order and all reductions are
/// sequential.
pub fn thread_pool(workers: usize) -> Result<rayon::ThreadPool, AppError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| AppError::Io(e.to_string()))
}
