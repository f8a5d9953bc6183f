use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::RunConfig;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileHash {
    pub path: PathBuf,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    /// Hash of the config and tool version; embedded in every artifact.
    pub run_hash: String,
    pub config: RunConfig,
    pub seeds: Vec<u64>,
    pub threads: usize,
    pub started: String,
    pub wall_time_s: f64,
    pub exit_code: i32,
    pub pass: bool,
    pub inputs: Vec<FileHash>,
    /// Paths relative to the manifest directory.
    pub artifacts: Vec<FileHash>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn file_hash(path: &Path) -> Result<String> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(sha256_hex(&bytes))
}

pub fn run_hash(cfg: &RunConfig) -> String {
    let body = serde_json::json!({
        "version": env!("CARGO_PKG_VERSION"),
        "config": cfg.identity(),
    });
    sha256_hex(body.to_string().as_bytes())
}

pub fn read_manifest(path: &Path) -> Result<Manifest> {
    let text = fs::read_to_string(path).with_context(|| format!("reading manifest {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing manifest {}", path.display()))
}

pub fn write_manifest(dir: &Path, m: &Manifest) -> Result<PathBuf> {
    let path = dir.join(MANIFEST_FILE);
    fs::write(&path, serde_json::to_string_pretty(m)? + "\n")?;
    Ok(path)
}
