//! Run manifests: the resolved command, its inputs and checksummed outputs.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::commands::Command;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileRecord {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

impl FileRecord {
    pub fn of(path: &Path, name: String) -> Result<Self> {
        let data = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        Ok(Self {
            path: name,
            sha256: sha256_hex(&data),
            bytes: data.len() as u64,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    /// Fully resolved command with every parameter, grid, seed and tolerance.
    pub command: Command,
    /// SHA-256 of the serialized command and the input checksums.
    pub input_hash: String,
    pub inputs: Vec<FileRecord>,
    pub outputs: Vec<FileRecord>,
    pub passed: bool,
    pub started_unix: u64,
    pub wall_clock_seconds: f64,
}

pub fn sha256_hex(data: &[u8]) -> String {
    hex::encode(Sha256::digest(data))
}

pub fn input_hash(command: &Command, inputs: &[FileRecord]) -> Result<String> {
    let mut h = Sha256::new();
    h.update(serde_json::to_vec(command)?);
    for f in inputs {
        h.update(f.path.as_bytes());
        h.update(f.sha256.as_bytes());
    }
    Ok(hex::encode(h.finalize()))
}

/// Collects the files a command writes into its output directory.
pub struct Outputs {
    dir: PathBuf,
    names: Vec<String>,
}

impl Outputs {
    pub fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            names: Vec::new(),
        })
    }

    pub fn write(&mut self, name: &str, data: &[u8]) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, data).with_context(|| format!("writing {}", path.display()))?;
        if !self.names.iter().any(|n| n == name) {
            self.names.push(name.to_string());
        }
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut data = serde_json::to_vec_pretty(value)?;
        data.push(b'\n');
        self.write(name, &data)
    }

    pub fn write_with<F>(&mut self, name: &str, f: F) -> Result<()>
    where
        F: FnOnce(&mut Vec<u8>) -> std::io::Result<()>,
    {
        let mut data = Vec::new();
        f(&mut data)?;
        self.write(name, &data)
    }

    pub fn records(&self) -> Result<Vec<FileRecord>> {
        self.names
            .iter()
            .map(|n| FileRecord::of(&self.dir.join(n), n.clone()))
            .collect()
    }
}

pub fn read(path: &Path) -> Result<RunManifest> {
    let text = fs::read_to_string(path).with_context(|| format!("reading manifest {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing manifest {}", path.display()))
}
