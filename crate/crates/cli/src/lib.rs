//! Scenario files, dispatch and artifact writing for the `mtsim` binary.

pub mod commands;
pub mod config;
pub mod output;
pub mod schema;

use std::path::{Path, PathBuf};
use std::time::Instant;

pub use commands::{run_scenario, Artifacts};
pub use config::{parse_scenario, Scenario, Subcommand, Value};
pub use output::{write_artifacts, Manifest};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] mtsim_core::Error),
    #[error("i/o error on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    /// 2 for bad input, 3 for numerical failure, 1 for I/O trouble.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Invalid(_) => 2,
            CliError::Core(e) if e.is_validation() => 2,
            CliError::Core(_) => 3,
            CliError::Io { .. } => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(CliError::Invalid(msg.into()))
}

/// Run a parsed scenario on `threads` workers (all cores when None) and
/// write its artifacts to `out_dir`. Returns the manifest that was written.
pub fn execute(scenario: &Scenario, out_dir: &Path, threads: Option<usize>) -> Result<Manifest> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        if n == 0 {
            return invalid("thread count must be at least 1");
        }
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| CliError::Invalid(format!("cannot start thread pool: {e}")))?;
    let start = Instant::now();
    let artifacts = pool.install(|| run_scenario(scenario))?;
    let manifest = Manifest::new(scenario, &artifacts, pool.current_num_threads(), start.elapsed().as_secs_f64());
    write_artifacts(out_dir, &artifacts, &manifest)?;
    Ok(manifest)
}
