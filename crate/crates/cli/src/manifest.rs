//! Output directories with a checksum manifest of every written file.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thetafrac::ExperimentConfig;

use crate::settings::CliError;

pub const MANIFEST_NAME: &str = "manifest.json";
pub const MANIFEST_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    /// Relative to the manifest's directory.
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub command: String,
    pub config: ExperimentConfig,
    pub files: Vec<ManifestEntry>,
}

fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Collects files written under one directory.
pub struct OutputDir {
    root: PathBuf,
    files: Vec<ManifestEntry>,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(root)
            .map_err(|e| CliError::Failure(format!("{}: {e}", root.display())))?;
        Ok(Self {
            root: root.to_path_buf(),
            files: Vec::new(),
        })
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf, CliError> {
        let path = self.root.join(name);
        fs::write(&path, bytes)
            .map_err(|e| CliError::Failure(format!("{}: {e}", path.display())))?;
        self.files.retain(|f| f.path != name);
        self.files.push(ManifestEntry {
            path: name.to_string(),
            bytes: bytes.len() as u64,
            sha256: sha256_hex(bytes),
        });
        Ok(path)
    }

    /// Writes `manifest.json` listing every file, sorted by path.
    pub fn finish(mut self, command: &str, config: &ExperimentConfig) -> Result<PathBuf, CliError> {
        self.files.sort_by(|a, b| a.path.cmp(&b.path));
        let manifest = Manifest {
            schema_version: MANIFEST_SCHEMA_VERSION,
            command: command.to_string(),
            config: config.clone(),
            files: self.files,
        };
        let path = self.root.join(MANIFEST_NAME);
        fs::write(&path, thetafrac::io::to_json(&manifest))
            .map_err(|e| CliError::Failure(format!("{}: {e}", path.display())))?;
        Ok(path)
    }
}

/// Recomputes the checksum of every listed file: `(path, matches)`.
pub fn check(manifest_path: &Path) -> Result<Vec<(String, bool)>, CliError> {
    let text = fs::read_to_string(manifest_path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", manifest_path.display())))?;
    let manifest: Manifest = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", manifest_path.display())))?;
    let dir = manifest_path.parent().unwrap_or(Path::new("."));
    Ok(manifest
        .files
        .iter()
        .map(|f| {
            let ok = fs::read(dir.join(&f.path))
                .map(|b| b.len() as u64 == f.bytes && sha256_hex(&b) == f.sha256)
                .unwrap_or(false);
            (f.path.clone(), ok)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_of_empty_input() {
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }

    #[test]
    fn tampering_is_detected() {
        let dir = tempfile::tempdir().unwrap();
        let mut out = OutputDir::create(dir.path()).unwrap();
        out.write("a.txt", b"one").unwrap();
        out.write("b.txt", b"two").unwrap();
        let m = out.finish("test", &ExperimentConfig::default()).unwrap();
        assert!(check(&m).unwrap().iter().all(|(_, ok)| *ok));
        fs::write(dir.path().join("b.txt"), b"TWO").unwrap();
        let res = check(&m).unwrap();
        assert_eq!(res, vec![("a.txt".into(), true), ("b.txt".into(), false)]);
    }
}
