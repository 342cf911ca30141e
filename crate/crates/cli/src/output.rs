//! Deterministic file output: fixed CSV dialect and a hashed manifest.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::CliError;

pub use geoop::shapes::io::fmt_f64;

/// Collects every file a command writes, for the manifest.
pub struct OutputDir {
    root: PathBuf,
    written: Vec<String>,
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(format!("{}: {e}", path.display()))
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(root).map_err(|e| io_err(root, e))?;
        Ok(OutputDir {
            root: root.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn path(&self, rel: &str) -> PathBuf {
        self.root.join(rel)
    }

    pub fn write_bytes(&mut self, rel: &str, bytes: &[u8]) -> Result<(), CliError> {
        let path = self.path(rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| io_err(parent, e))?;
        }
        fs::write(&path, bytes).map_err(|e| io_err(&path, e))?;
        if !self.written.iter().any(|w| w == rel) {
            self.written.push(rel.to_string());
        }
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, rel: &str, value: &T) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Runtime(e.to_string()))?;
        text.push('\n');
        self.write_bytes(rel, text.as_bytes())
    }

    pub fn write_csv(&mut self, rel: &str, header: &[String], rows: &[Vec<String>]) -> Result<(), CliError> {
        let bytes = csv_bytes(header, rows)?;
        self.write_bytes(rel, &bytes)
    }

    /// `manifest.json`: every written file with its size and SHA-256.
    pub fn finish(mut self) -> Result<(), CliError> {
        let mut files = std::mem::take(&mut self.written);
        files.sort();
        let mut entries = Vec::with_capacity(files.len());
        for rel in files {
            let path = self.path(&rel);
            let bytes = fs::read(&path).map_err(|e| io_err(&path, e))?;
            entries.push(ManifestEntry {
                path: rel,
                bytes: bytes.len() as u64,
                sha256: sha256_hex(&bytes),
            });
        }
        let manifest = Manifest {
            tool: "geoop",
            version: env!("CARGO_PKG_VERSION"),
            files: entries,
        };
        self.write_json("manifest.json", &manifest)
    }
}

#[derive(Serialize)]
struct Manifest {
    tool: &'static str,
    version: &'static str,
    files: Vec<ManifestEntry>,
}

#[derive(Serialize)]
struct ManifestEntry {
    path: String,
    bytes: u64,
    sha256: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Comma separated, header row, LF line endings.
pub fn csv_bytes(header: &[String], rows: &[Vec<String>]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let map = |e: csv::Error| CliError::Runtime(e.to_string());
    w.write_record(header).map_err(map)?;
    for r in rows {
        w.write_record(r).map_err(map)?;
    }
    w.into_inner().map_err(|e| CliError::Runtime(e.to_string()))
}

pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

pub fn read_csv(path: &Path) -> Result<CsvTable, CliError> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| io_err(path, e))?;
    let header = r
        .headers()
        .map_err(|e| io_err(path, e))?
        .iter()
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| io_err(path, e))?;
        rows.push(rec.iter().map(str::to_string).collect());
    }
    Ok(CsvTable { header, rows })
}

pub fn parse_f64(s: &str, path: &Path, line: usize) -> Result<f64, CliError> {
    s.trim()
        .parse()
        .map_err(|_| io_err(path, format!("row {line}: {s:?} is not a number")))
}
