//! Atomic artifact writing and the run manifest.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::commands::Artifacts;
use crate::config::Scenario;
use crate::{CliError, Result};

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub name: String,
    pub subcommand: String,
    pub seed: u64,
    /// Every key exactly as written in the scenario file.
    pub inputs: std::collections::BTreeMap<String, String>,
    pub version: String,
    pub threads: usize,
    pub wall_time_s: f64,
    pub files: Vec<String>,
}

impl Manifest {
    pub fn new(sc: &Scenario, artifacts: &Artifacts, threads: usize, wall_time_s: f64) -> Self {
        let mut files: Vec<String> = artifacts.files.iter().map(|(n, _)| n.clone()).collect();
        files.push("result.json".into());
        Manifest {
            name: sc.name.clone(),
            subcommand: sc.subcommand.as_str().into(),
            seed: sc.seed,
            inputs: sc.inputs.clone(),
            version: env!("CARGO_PKG_VERSION").into(),
            threads,
            wall_time_s,
            files,
        }
    }
}

fn io(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

/// Write `contents` to a hidden temporary next to `path`, then rename it into
/// place.
fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = path.with_file_name(format!(".{name}.tmp"));
    let mut f = fs::File::create(&tmp).map_err(io(&tmp))?;
    f.write_all(contents).map_err(io(&tmp))?;
    f.sync_all().map_err(io(&tmp))?;
    drop(f);
    fs::rename(&tmp, path).map_err(io(path))
}

/// Data files first, then result.json, then manifest.json; a manifest is
/// only present once everything it lists is in place.
pub fn write_artifacts(dir: &Path, artifacts: &Artifacts, manifest: &Manifest) -> Result<()> {
    fs::create_dir_all(dir).map_err(io(dir))?;
    let stale = dir.join("manifest.json");
    if stale.exists() {
        fs::remove_file(&stale).map_err(io(&stale))?;
    }
    for (name, text) in &artifacts.files {
        write_atomic(&dir.join(name), text.as_bytes())?;
    }
    let result = serde_json::to_string_pretty(&artifacts.result).expect("result serializes") + "\n";
    write_atomic(&dir.join("result.json"), result.as_bytes())?;
    let m = serde_json::to_string_pretty(manifest).expect("manifest serializes") + "\n";
    write_atomic(&dir.join("manifest.json"), m.as_bytes())
}
