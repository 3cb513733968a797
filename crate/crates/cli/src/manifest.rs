//! Run manifest written next to every solve output.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FileRef {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunOptions {
    pub loss_orientation: String,
    pub max_iterations: Option<usize>,
    pub tolerance: f64,
    /// Recorded only; nothing in a run is random.
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub load_ms: f64,
    pub build_ms: f64,
    pub solve_ms: f64,
    pub report_ms: f64,
    pub total_ms: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub scenario: Option<FileRef>,
    pub options: RunOptions,
    pub timing: Timing,
    pub status: String,
    pub exit_code: i32,
    pub reason: Option<String>,
    pub objective: Option<f64>,
    pub iterations: Option<usize>,
    /// Bundle file name -> sha256 of its bytes.
    pub files: BTreeMap<String, String>,
    pub exports: BTreeMap<String, FileRef>,
}

impl Manifest {
    pub fn new() -> Self {
        Manifest { tool: "hubflow".into(), version: env!("CARGO_PKG_VERSION").into(), ..Default::default() }
    }

    pub fn write(&self, dir: &Path) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        let mut text = serde_json::to_string_pretty(self).expect("manifest serializes");
        text.push('\n');
        std::fs::write(dir.join(MANIFEST_FILE), text)
    }

    pub fn read(dir: &Path) -> Result<Manifest, String> {
        let path = dir.join(MANIFEST_FILE);
        let text = std::fs::read_to_string(&path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn hash_file(path: &Path) -> std::io::Result<String> {
    Ok(sha256_hex(&std::fs::read(path)?))
}
