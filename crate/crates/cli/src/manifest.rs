//! Run manifests: an append-only record per invocation, named by the digest
//! of its deterministic fields. Re-running the same command with the same
//! inputs and seed lands on the same file with identical verdict and
//! witness lines; only the wall time may differ, and it is excluded from
//! the digest.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

pub struct Manifest {
    command: String,
    inputs: Vec<(String, String)>,
    fields: Vec<(String, String)>,
    verdict: Option<String>,
    witness: Option<String>,
}

impl Manifest {
    pub fn new(command: String) -> Self {
        Manifest {
            command,
            inputs: Vec::new(),
            fields: Vec::new(),
            verdict: None,
            witness: None,
        }
    }

    pub fn input_file(&mut self, path: &Path, contents: &str) {
        let mut hasher = Sha256::new();
        hasher.update(contents.as_bytes());
        let digest = hex(&hasher.finalize());
        self.inputs.push((path.display().to_string(), digest));
    }

    pub fn field(&mut self, key: &str, value: impl ToString) {
        self.fields.push((key.to_string(), value.to_string()));
    }

    pub fn verdict(&mut self, v: impl ToString) {
        self.verdict = Some(v.to_string());
    }

    pub fn witness(&mut self, w: impl ToString) {
        self.witness = Some(w.to_string());
    }

    /// The deterministic portion (everything except wall time).
    fn stable_text(&self) -> String {
        let mut out = String::from("manifest v1\n");
        let _ = writeln!(out, "command: {}", self.command);
        for (path, digest) in &self.inputs {
            let _ = writeln!(out, "input {path}: sha256:{digest}");
        }
        for (key, value) in &self.fields {
            let _ = writeln!(out, "{key}: {value}");
        }
        let _ = writeln!(out, "verdict: {}", self.verdict.as_deref().unwrap_or("none"));
        let _ = writeln!(out, "witness: {}", self.witness.as_deref().unwrap_or("none"));
        out
    }

    /// Writes `<digest>.manifest` under `dir` and returns the path. An
    /// existing file with the same digest is left in place.
    pub fn write(&self, dir: &Path, wall_ms: u128) -> std::io::Result<PathBuf> {
        let stable = self.stable_text();
        let mut hasher = Sha256::new();
        hasher.update(stable.as_bytes());
        let digest = hex(&hasher.finalize());
        fs::create_dir_all(dir)?;
        let path = dir.join(format!("{}.manifest", &digest[..16]));
        if !path.exists() {
            let full = format!("{stable}wall-ms: {wall_ms}\n");
            fs::write(&path, full)?;
        }
        Ok(path)
    }
}

fn hex(bytes: &[u8]) -> String {
    let mut out = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        let _ = write!(out, "{b:02x}");
    }
    out
}
