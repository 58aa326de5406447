//! Artifact emission: deterministic CSV text, SHA-256 checksums, and
//! the run manifest.
//!
//! Every artifact is written as a complete in-memory string and hashed
//! before it reaches the filesystem, so the manifest checksum always
//! matches the file content. Floats are printed with 17 significant
//! digits, enough to reconstruct the exact `f64`, which makes artifact
//! bytes a faithful witness for determinism comparisons.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::CliError;

/// Prints a float with full round-trip precision.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

/// Manifest record for one emitted file.
#[derive(Clone, Debug, Serialize)]
pub struct ArtifactRecord {
    pub name: String,
    pub rows: usize,
    pub sha256: String,
}

fn write_text(dir: &Path, name: &str, text: &str, rows: usize) -> Result<ArtifactRecord, CliError> {
    let path = dir.join(name);
    fs::write(&path, text).map_err(|e| {
        CliError::Validation(format!("cannot write artifact {}: {e}", path.display()))
    })?;
    Ok(ArtifactRecord { name: name.to_string(), rows, sha256: sha256_hex(text.as_bytes()) })
}

/// Writes a CSV artifact: header line, then one line per row.
pub fn write_csv(
    dir: &Path,
    name: &str,
    header: &str,
    rows: &[String],
) -> Result<ArtifactRecord, CliError> {
    let mut text = String::with_capacity(header.len() + 1 + rows.iter().map(|r| r.len() + 1).sum::<usize>());
    text.push_str(header);
    text.push('\n');
    for row in rows {
        text.push_str(row);
        text.push('\n');
    }
    write_text(dir, name, &text, rows.len())
}

/// Writes a pretty-printed JSON artifact; `rows` is reported as 1.
pub fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<ArtifactRecord, CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Validation(format!("cannot serialize {name}: {e}")))?;
    text.push('\n');
    write_text(dir, name, &text, 1)
}

/// Component versions recorded in the manifest.
#[derive(Clone, Debug, Serialize)]
pub struct Versions {
    pub cli: &'static str,
    pub core: &'static str,
}

/// Run manifest, written last so it can checksum every other artifact.
#[derive(Debug, Serialize)]
pub struct Manifest {
    /// SHA-256 of the configuration file bytes as read, before any
    /// command-line overrides.
    pub config_sha256: String,
    /// Effective master seed, when the experiment is stochastic.
    pub seed: Option<u64>,
    pub versions: Versions,
    pub wall_ms: u128,
    pub artifacts: Vec<ArtifactRecord>,
    /// Experiment-specific scalar outcomes (margin levels, clip counts,
    /// override records). Keys are sorted for stable output.
    pub flags: BTreeMap<String, serde_json::Value>,
}

impl Manifest {
    pub fn new(config_bytes: &[u8], seed: Option<u64>) -> Self {
        Manifest {
            config_sha256: sha256_hex(config_bytes),
            seed,
            versions: Versions { cli: env!("CARGO_PKG_VERSION"), core: excc_core::VERSION },
            wall_ms: 0,
            artifacts: Vec::new(),
            flags: BTreeMap::new(),
        }
    }

    pub fn flag(&mut self, key: &str, value: impl Into<serde_json::Value>) {
        self.flags.insert(key.to_string(), value.into());
    }

    pub fn write(&self, dir: &Path) -> Result<(), CliError> {
        write_json(dir, "manifest.json", self)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips_exactly() {
        for &x in &[0.1, 1.0 / 3.0, 2.0f64.sqrt(), 1e-300, -7.25e200, 0.0] {
            let formatted = fmt_f64(x);
            let back: f64 = formatted.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{formatted}");
        }
    }

    #[test]
    fn sha256_matches_known_vector() {
        // SHA-256 of the empty string and of "abc" are standard test
        // vectors.
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn csv_artifact_records_rows_and_checksum() {
        let dir = tempfile::tempdir().unwrap();
        let rows = vec!["1,2".to_string(), "3,4".to_string()];
        let record = write_csv(dir.path(), "t.csv", "a,b", &rows).unwrap();
        assert_eq!(record.rows, 2);
        let bytes = fs::read(dir.path().join("t.csv")).unwrap();
        assert_eq!(String::from_utf8(bytes.clone()).unwrap(), "a,b\n1,2\n3,4\n");
        assert_eq!(record.sha256, sha256_hex(&bytes));
    }

    #[test]
    fn manifest_flags_serialize_in_sorted_order() {
        let mut manifest = Manifest::new(b"{}", Some(7));
        manifest.flag("zeta", 1.0);
        manifest.flag("alpha", "x");
        let text = serde_json::to_string(&manifest).unwrap();
        let a = text.find("alpha").unwrap();
        let z = text.find("zeta").unwrap();
        assert!(a < z);
    }
}
