use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, Result};
use crate::request::RunRequest;

pub const MANIFEST_FILE: &str = "manifest.json";

/// Run record written next to the CSV outputs it describes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub request: RunRequest,
    pub base_seed: Option<u64>,
    pub normalization: Option<String>,
    pub workers: usize,
    pub started_unix_ms: u128,
    pub wall_clock_seconds: f64,
    /// CSV files in the same directory, relative names.
    pub outputs: Vec<String>,
    pub derived: Value,
}

impl Manifest {
    pub fn load(path: &Path) -> Result<Manifest> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
        serde_json::from_str(&text).map_err(|source| CliError::Manifest { path: path.to_path_buf(), source })
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

/// Run `request`, write its tables into `out_dir`, then write the manifest.
pub fn execute_and_write(request: RunRequest, workers: usize, out_dir: &Path) -> Result<Manifest> {
    let started_unix_ms = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis()).unwrap_or(0);
    let clock = Instant::now();
    let output = request.execute(workers)?;
    let wall_clock_seconds = clock.elapsed().as_secs_f64();

    fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let mut outputs = Vec::with_capacity(output.tables.len());
    for table in &output.tables {
        let path: PathBuf = out_dir.join(&table.name);
        fs::write(&path, &table.bytes).map_err(io_err(&path))?;
        outputs.push(table.name.clone());
    }
    let manifest = Manifest {
        tool: "qwalk".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        base_seed: request.base_seed(),
        normalization: request.normalization().map(|n| n.tag().to_string()),
        request,
        workers,
        started_unix_ms,
        wall_clock_seconds,
        outputs,
        derived: output.derived,
    };
    let path = out_dir.join(MANIFEST_FILE);
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    fs::write(&path, text + "\n").map_err(io_err(&path))?;
    Ok(manifest)
}
