//! CSV and manifest emission. Every file starts with a comment carrying the
//! config checksum, then a header row; writes go through a temp file and a
//! rename so concurrent readers never see a partial file.

use crate::config::CliError;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Write atomically and return the content hash.
pub fn write_atomic(path: &Path, content: &[u8]) -> Result<String, CliError> {
    let dir = path
        .parent()
        .ok_or_else(|| CliError::Io(format!("{} has no parent directory", path.display())))?;
    let file_name = path
        .file_name()
        .and_then(|n| n.to_str())
        .ok_or_else(|| CliError::Io(format!("{} has no file name", path.display())))?;
    let tmp: PathBuf = dir.join(format!(".{file_name}.tmp"));
    std::fs::write(&tmp, content)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", tmp.display())))?;
    std::fs::rename(&tmp, path)
        .map_err(|e| CliError::Io(format!("cannot move {} into place: {e}", tmp.display())))?;
    Ok(sha256_hex(content))
}

/// CSV builder with the checksum comment and a fixed header.
pub struct Csv {
    buf: String,
}

impl Csv {
    pub fn new(config_sha256: &str, header: &str) -> Self {
        let mut buf = String::new();
        buf.push_str(&format!("# config_sha256={config_sha256}\n"));
        buf.push_str(header);
        buf.push('\n');
        Csv { buf }
    }

    pub fn row(&mut self, fields: &[String]) {
        self.buf.push_str(&fields.join(","));
        self.buf.push('\n');
    }

    pub fn finish(self) -> Vec<u8> {
        self.buf.into_bytes()
    }
}

pub fn fmt_db(v: f64) -> String {
    format!("{v:.6}")
}

pub fn fmt_prob(v: f64) -> String {
    format!("{v:.6}")
}

pub fn fmt_m(v: f64) -> String {
    format!("{v:.3}")
}

/// One emitted artifact in the manifest.
#[derive(Debug, Serialize)]
pub struct ArtifactRecord {
    pub path: String,
    pub sha256: String,
}

/// Echo of one resolved scenario.
#[derive(Debug, Serialize)]
pub struct ScenarioRecord {
    pub name: String,
    pub isd_m: f64,
    pub rx: String,
    pub shadowing: bool,
    pub seed: u64,
    pub ue_count: usize,
    pub rings: u32,
    pub drop_region: String,
}

/// Manifest echoed next to the artifacts: resolved inputs plus checksums.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub config_sha256: String,
    pub defaults: crate::config::Defaults,
    pub scenarios: Vec<ScenarioRecord>,
    pub artifacts: Vec<ArtifactRecord>,
}
