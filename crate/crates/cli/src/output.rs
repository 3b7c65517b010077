//! Artifact writing: shortest round-trip numbers, LF-terminated CSV with
//! a header, pretty JSON, and a manifest with SHA-256 checksums.

use crate::config::RunConfig;
use crate::error::CliError;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

pub fn num(v: f64) -> String {
    if v.is_nan() {
        return "NaN".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        // no negative zero in artifacts
        return "0".into();
    }
    let mut b = ryu::Buffer::new();
    let s = b.format_finite(v);
    s.strip_suffix(".0").unwrap_or(s).to_string()
}

pub struct Table {
    w: csv::Writer<Vec<u8>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Result<Self, CliError> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(header)?;
        Ok(Table { w })
    }

    pub fn row<I, S>(&mut self, fields: I) -> Result<(), CliError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.w.write_record(fields)?;
        Ok(())
    }

    pub fn finish(self) -> Result<Vec<u8>, CliError> {
        self.w
            .into_inner()
            .map_err(|e| CliError::Usage(format!("csv buffer: {e}")))
    }
}

pub fn json<T: Serialize>(v: &T) -> Result<Vec<u8>, CliError> {
    let mut out = serde_json::to_vec_pretty(v)?;
    out.push(b'\n');
    Ok(out)
}

#[derive(Serialize)]
struct ArtifactEntry {
    file: String,
    bytes: usize,
    sha256: String,
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    cli_version: &'a str,
    core_version: &'a str,
    config: &'a RunConfig,
    passed: bool,
    artifacts: Vec<ArtifactEntry>,
}

/// Collects named artifacts and writes them, plus `manifest.json`, into
/// the output directory.
pub struct Artifacts {
    files: Vec<(String, Vec<u8>)>,
}

impl Artifacts {
    pub fn new() -> Self {
        Artifacts { files: Vec::new() }
    }

    pub fn add(&mut self, name: &str, data: Vec<u8>) {
        self.files.push((name.to_string(), data));
    }

    pub fn get(&self, name: &str) -> Option<&[u8]> {
        self.files
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, d)| d.as_slice())
    }

    pub fn write(&self, dir: &Path, command: &str, cfg: &RunConfig, passed: bool) -> Result<(), CliError> {
        let io = |path: PathBuf| move |e| CliError::Io { path, source: e };
        std::fs::create_dir_all(dir).map_err(io(dir.to_path_buf()))?;
        let mut entries = Vec::new();
        for (name, data) in &self.files {
            let path = dir.join(name);
            std::fs::write(&path, data).map_err(io(path.clone()))?;
            entries.push(ArtifactEntry {
                file: name.clone(),
                bytes: data.len(),
                sha256: hex::encode(Sha256::digest(data)),
            });
        }
        let manifest = Manifest {
            command,
            cli_version: env!("CARGO_PKG_VERSION"),
            core_version: cosserat_core::VERSION,
            config: cfg,
            passed,
            artifacts: entries,
        };
        let path = dir.join("manifest.json");
        std::fs::write(&path, json(&manifest)?).map_err(io(path.clone()))?;
        Ok(())
    }
}

impl Default for Artifacts {
    fn default() -> Self {
        Self::new()
    }
}
