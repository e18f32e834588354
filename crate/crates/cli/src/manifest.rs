use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

pub const MANIFEST_SCHEMA: &str = "run-manifest v1";

#[derive(Debug, Serialize)]
pub struct Conventions {
    pub seed: u64,
    pub largest_orbit_rep: bool,
    pub largest_coset_member: bool,
    pub root_offset: u64,
}

#[derive(Debug, Serialize)]
pub struct ToleranceSettings {
    pub matrix: f64,
    pub integer: f64,
    pub check: f64,
}

/// Record of one run: the command line, hashes of everything read and
/// written, and the settings that affect the output.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub schema: String,
    pub tool: String,
    pub command: String,
    pub arguments: Vec<String>,
    pub inputs: BTreeMap<String, String>,
    pub conventions: Conventions,
    pub tolerances: ToleranceSettings,
    pub outputs: BTreeMap<String, String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Collects output files and writes them together with a manifest.
pub struct Outputs {
    files: Vec<(PathBuf, String)>,
}

impl Outputs {
    pub fn new() -> Self {
        Outputs { files: Vec::new() }
    }

    pub fn add(&mut self, path: impl Into<PathBuf>, text: String) {
        self.files.push((path.into(), text));
    }

    fn write_files(&self) -> Result<()> {
        for (path, text) in &self.files {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            }
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
        }
        Ok(())
    }

    /// Writes the files without a manifest.
    pub fn write_unrecorded(self) -> Result<()> {
        self.write_files()
    }

    /// Writes every file and the manifest at `manifest_path`. Output paths
    /// in the manifest are relative to the manifest's directory.
    pub fn write(self, mut manifest: RunManifest, manifest_path: &Path) -> Result<()> {
        let base = manifest_path.parent().unwrap_or(Path::new(""));
        self.write_files()?;
        for (path, text) in &self.files {
            let key = path.strip_prefix(base).unwrap_or(path).display().to_string();
            manifest.outputs.insert(key, sha256_hex(text.as_bytes()));
        }
        let text = serde_json::to_string_pretty(&manifest)? + "\n";
        fs::write(manifest_path, text).with_context(|| format!("writing {}", manifest_path.display()))?;
        Ok(())
    }
}
