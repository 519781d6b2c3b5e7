//! CSV tables, manifests and atomic file output.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Shortest representation that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

/// A CSV table with a fixed header. Complex values occupy two columns.
#[derive(Clone, Debug, Default)]
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Complex(Complex64),
    Bool(bool),
    Text(String),
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<Complex64> for Cell {
    fn from(v: Complex64) -> Self {
        Cell::Complex(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl Table {
    /// Header names; a name ending in `*` is a complex column and expands to
    /// `name_re,name_im`.
    pub fn new(columns: &[&str]) -> Self {
        let header = columns
            .iter()
            .flat_map(|c| match c.strip_suffix('*') {
                Some(base) => vec![format!("{base}_re"), format!("{base}_im")],
                None => vec![c.to_string()],
            })
            .collect();
        Self { header, rows: Vec::new() }
    }

    pub fn push(&mut self, cells: Vec<Cell>) {
        let mut row = Vec::with_capacity(self.header.len());
        for c in cells {
            match c {
                Cell::Int(v) => row.push(v.to_string()),
                Cell::Float(v) => row.push(fmt_f64(v)),
                Cell::Complex(v) => {
                    row.push(fmt_f64(v.re));
                    row.push(fmt_f64(v.im));
                }
                Cell::Bool(v) => row.push(if v { "1".into() } else { "0".into() }),
                Cell::Text(v) => row.push(v),
            }
        }
        assert_eq!(row.len(), self.header.len(), "row width does not match header");
        self.rows.push(row);
    }

    /// Appends the rows of a table with the same header.
    pub fn append(&mut self, other: Table) {
        assert_eq!(self.header, other.header, "appending a table with a different header");
        self.rows.extend(other.rows);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{}", self.header.join(",")).unwrap();
        for r in &self.rows {
            writeln!(out, "{}", r.join(",")).unwrap();
        }
        out
    }
}

/// Git-style object hash: SHA-256 over `"blob <len>\0" + content`, hex encoded.
pub fn content_hash(content: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(format!("blob {}\0", content.len()).as_bytes());
    h.update(content);
    h.finalize().iter().fold(String::with_capacity(64), |mut s, b| {
        write!(s, "{b:02x}").unwrap();
        s
    })
}

/// Path with `.partial` appended to the file name.
pub fn partial_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".partial");
    path.with_file_name(name)
}

/// Writes `<path>.partial`, syncs it, then renames it over `path`.
pub fn write_atomic(path: &Path, content: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let tmp = partial_path(path);
    let mut f = std::fs::File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
    f.write_all(content).map_err(|e| Error::io(&tmp, e))?;
    f.sync_all().map_err(|e| Error::io(&tmp, e))?;
    drop(f);
    std::fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, pass: bool, detail: String) -> Self {
        Self { name: name.to_string(), pass, detail }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Manifest {
    pub experiment: String,
    pub config: serde_json::Value,
    pub config_hash: String,
    pub csv: String,
    pub csv_hash: String,
    pub rows: usize,
    pub summary: serde_json::Value,
    pub checks: Vec<Check>,
    pub version: String,
}

/// Manifest path beside a CSV: `x.csv` → `x.manifest.json`.
pub fn manifest_path(csv: &Path) -> PathBuf {
    let stem = csv.file_stem().unwrap_or_default().to_string_lossy().into_owned();
    csv.with_file_name(format!("{stem}.manifest.json"))
}

/// Writes the CSV and its manifest, both atomically.
pub fn write_outputs<C: Serialize, S: Serialize>(
    csv_path: &Path,
    experiment: &str,
    config: &C,
    table: &Table,
    summary: &S,
    checks: Vec<Check>,
) -> Result<PathBuf> {
    let config = serde_json::to_value(config)?;
    let config_bytes = serde_json::to_vec(&config)?;
    let csv = table.to_csv();
    let manifest = Manifest {
        experiment: experiment.to_string(),
        config_hash: content_hash(&config_bytes),
        config,
        csv: csv_path
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default(),
        csv_hash: content_hash(csv.as_bytes()),
        rows: table.len(),
        summary: serde_json::to_value(summary)?,
        checks,
        version: env!("CARGO_PKG_VERSION").to_string(),
    };
    write_atomic(csv_path, csv.as_bytes())?;
    let mpath = manifest_path(csv_path);
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    write_atomic(&mpath, text.as_bytes())?;
    Ok(mpath)
}
