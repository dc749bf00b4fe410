//! CSV and JSON result files with provenance metadata.
//!
//! CSV files start with `# key: value` lines, then a header row. Numbers
//! are written with 17 significant digits so a file read back reproduces
//! the in-memory values exactly.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Hex SHA-256 of `bytes`.
pub fn content_hash(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Ordered `key: value` metadata written ahead of the data.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Metadata(pub Vec<(String, String)>);

impl Metadata {
    /// Resolved config as one-line JSON plus its hash and the code version.
    pub fn for_config<T: Serialize>(config: &T) -> Result<Self> {
        let json = serde_json::to_string(config).map_err(|e| Error::Config(e.to_string()))?;
        Ok(Metadata(vec![
            ("config_hash".into(), content_hash(json.as_bytes())),
            ("version".into(), CODE_VERSION.into()),
            ("config".into(), json),
        ]))
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.0.push((key.into(), value.into()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

/// A parsed numeric CSV file.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub meta: Metadata,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn new(header: Vec<String>, rows: Vec<Vec<f64>>) -> Self {
        CsvTable {
            meta: Metadata::default(),
            header,
            rows,
        }
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    /// Header and rows as written, without metadata.
    pub fn body(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::invalid(format!("csv: {e}"));
        w.write_record(&self.header).map_err(csv_err)?;
        for r in &self.rows {
            if r.len() != self.header.len() {
                return Err(Error::invalid(format!(
                    "row has {} fields, header has {}",
                    r.len(),
                    self.header.len()
                )));
            }
            w.write_record(r.iter().map(|v| format!("{v:.16e}"))).map_err(csv_err)?;
        }
        w.into_inner().map_err(|e| Error::invalid(format!("csv: {e}")))
    }

    /// Writes the file, adding a `content_hash` entry over the body.
    pub fn write(&self, path: &Path) -> Result<String> {
        let body = self.body()?;
        let hash = content_hash(&body);
        let mut out = Vec::with_capacity(body.len() + 512);
        for (k, v) in &self.meta.0 {
            writeln!(out, "# {k}: {}", v.replace('\n', " ")).expect("write to Vec");
        }
        writeln!(out, "# content_hash: {hash}").expect("write to Vec");
        out.extend_from_slice(&body);
        write_file(path, &out)?;
        Ok(hash)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let parse_err = |message: String| Error::Parse {
            path: path.to_path_buf(),
            message,
        };
        let mut meta = Metadata::default();
        let mut body_start = 0;
        for line in text.split_inclusive('\n') {
            let Some(rest) = line.strip_prefix('#') else { break };
            body_start += line.len();
            let rest = rest.trim();
            if let Some((k, v)) = rest.split_once(": ") {
                meta.push(k.trim(), v.trim_end());
            }
        }
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(text[body_start..].as_bytes());
        let header: Vec<String> = rdr
            .headers()
            .map_err(|e| parse_err(e.to_string()))?
            .iter()
            .map(str::to_string)
            .collect();
        let mut rows = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| parse_err(e.to_string()))?;
            let row = rec
                .iter()
                .map(|f| f.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| parse_err(format!("data row {}: {e}", i + 1)))?;
            rows.push(row);
        }
        Ok(CsvTable { meta, header, rows })
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// Pretty JSON with the provenance fields of `meta` and a hash of `payload`.
pub fn write_json<T: Serialize>(path: &Path, meta: &Metadata, payload: &T) -> Result<String> {
    let payload = serde_json::to_value(payload).map_err(|e| Error::Config(e.to_string()))?;
    let hash = content_hash(payload.to_string().as_bytes());
    let mut doc = serde_json::Map::new();
    for (k, v) in &meta.0 {
        let value = if k == "config" {
            serde_json::from_str(v).unwrap_or_else(|_| serde_json::Value::String(v.clone()))
        } else {
            serde_json::Value::String(v.clone())
        };
        doc.insert(k.clone(), value);
    }
    doc.insert("content_hash".into(), serde_json::Value::String(hash.clone()));
    doc.insert("result".into(), payload);
    let mut text = serde_json::to_string_pretty(&serde_json::Value::Object(doc)).map_err(|e| Error::Config(e.to_string()))?;
    text.push('\n');
    write_file(path, text.as_bytes())?;
    Ok(hash)
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    write_file(path, text.as_bytes())
}

/// `dir/name`.
pub fn out_path(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}
