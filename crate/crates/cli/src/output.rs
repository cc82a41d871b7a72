use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Everything needed to reproduce one emitted table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Value,
    pub tool: String,
    pub version: String,
    pub seed: Option<u64>,
    pub output_sha256: String,
}

impl RunManifest {
    pub fn new(command: &str, parameters: Value, seed: Option<u64>, body: &[u8]) -> Self {
        Self {
            command: command.to_string(),
            parameters,
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            output_sha256: sha256_hex(body),
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// `report.csv` -> `report.manifest.json`.
pub fn manifest_path(out: &Path) -> PathBuf {
    out.with_extension("manifest.json")
}

#[derive(Debug)]
pub enum CliError {
    /// Flags that parse but make no sense together. Exit status 2.
    Usage(String),
    /// The computation itself failed. Exit status 1.
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Failed(msg) => write!(f, "error: {msg}"),
        }
    }
}

impl From<tandem_sdt::Error> for CliError {
    fn from(e: tandem_sdt::Error) -> Self {
        match e {
            tandem_sdt::Error::InvalidParameter(_) => CliError::Usage(e.to_string()),
            other => CliError::Failed(other.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Failed(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Failed(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Failed(e.to_string())
    }
}

pub fn to_csv<R: Serialize>(rows: &[R]) -> Result<Vec<u8>, CliError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row)?;
    }
    writer.into_inner().map_err(|e| CliError::Failed(e.to_string()))
}

pub fn to_json<V: Serialize>(value: &V) -> Result<Vec<u8>, CliError> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// A finished command: its data and how to regenerate it.
pub struct Emission {
    pub body: Vec<u8>,
    pub manifest: RunManifest,
}

/// Writes to stdout, or to `out` plus a sibling manifest.
pub fn emit(emission: &Emission, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(&emission.body)?;
            stdout.flush()?;
        }
        Some(path) => {
            fs::write(path, &emission.body)?;
            fs::write(manifest_path(path), to_json(&emission.manifest)?)?;
        }
    }
    Ok(())
}
