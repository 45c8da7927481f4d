//! Parallel sweep runner, CSV/metadata output, config files and figure
//! presets on top of [`zzgate_core`].

pub mod config_file;
pub mod figures;
pub mod output;
pub mod runner;

pub use zzgate_core as core;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Sweep(#[from] zzgate_core::experiment::SweepError),
    #[error(transparent)]
    Fidelity(#[from] zzgate_core::FidelityError),
    #[error("could not start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
    #[error("metadata output: {0}")]
    Json(#[from] serde_json::Error),
}
