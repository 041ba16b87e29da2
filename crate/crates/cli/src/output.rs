//! CSV emission and the run manifest.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

/// Renders a number for CSV output: shortest decimal that round-trips to
/// the same `f64` (never more than 17 significant digits), `inf`/`-inf` for
/// infinities.
pub fn fmt_num(v: f64) -> String {
    format!("{v}")
}

/// `%g`-style rendering with `digits` significant digits, for console text.
pub fn fmt_short(v: f64, digits: usize) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    if v == 0.0 {
        return "0".into();
    }
    let exp = v.abs().log10().floor() as i32;
    if exp < -4 || exp >= digits as i32 {
        return format!("{:.*e}", digits.saturating_sub(1), v);
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    let s = format!("{v:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Accumulates CSV text with a fixed header.
#[derive(Debug)]
pub struct CsvTable {
    text: String,
    columns: usize,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        Self { text: format!("{}\n", header.join(",")), columns: header.len() }
    }

    pub fn row<I, S>(&mut self, cells: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let cells: Vec<String> = cells.into_iter().map(|c| c.as_ref().to_owned()).collect();
        debug_assert_eq!(cells.len(), self.columns);
        let _ = writeln!(self.text, "{}", cells.join(","));
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }
}

#[derive(Debug, Serialize)]
struct ManifestEntry {
    file: String,
    sha256: String,
    input_hash: String,
}

#[derive(Debug, Serialize)]
struct Manifest {
    command: String,
    input_hash: String,
    files: Vec<ManifestEntry>,
}

/// Files emitted by one command, plus the manifest describing them.
#[derive(Debug, Clone, PartialEq)]
pub struct RunArtifacts {
    pub out_dir: PathBuf,
    pub files: Vec<PathBuf>,
    pub manifest: PathBuf,
}

/// Writes files into an output directory and records them for the manifest.
pub struct ArtifactWriter {
    out_dir: PathBuf,
    command: String,
    input_hash: String,
    entries: Vec<ManifestEntry>,
    files: Vec<PathBuf>,
}

impl ArtifactWriter {
    /// `inputs` is every byte string that determines the outputs (scenario
    /// digest, canonical flags); their hash tags each emitted file.
    pub fn create(out_dir: &Path, command: &str, inputs: &[&str]) -> Result<Self> {
        fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
        let mut hasher = Sha256::new();
        hasher.update(command.as_bytes());
        for part in inputs {
            hasher.update([0u8]);
            hasher.update(part.as_bytes());
        }
        Ok(Self {
            out_dir: out_dir.to_path_buf(),
            command: command.to_owned(),
            input_hash: hex::encode(hasher.finalize()),
            entries: Vec::new(),
            files: Vec::new(),
        })
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<PathBuf> {
        let path = self.out_dir.join(name);
        fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
        self.entries.push(ManifestEntry {
            file: name.to_owned(),
            sha256: hex::encode(Sha256::digest(contents.as_bytes())),
            input_hash: self.input_hash.clone(),
        });
        self.files.push(path.clone());
        Ok(path)
    }

    pub fn finish(self) -> Result<RunArtifacts> {
        let manifest = Manifest { command: self.command, input_hash: self.input_hash, files: self.entries };
        let path = self.out_dir.join("manifest.json");
        let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serialises");
        text.push('\n');
        fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
        Ok(RunArtifacts { out_dir: self.out_dir, files: self.files, manifest: path })
    }
}
