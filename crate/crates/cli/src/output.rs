//! Artifact writing: atomic file replacement and CSV assembly.

use std::path::Path;

use oldb_core::Result;

/// Write through a temp file in the same directory and rename into place, so
/// readers never observe a partially written artifact.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Minimal CSV builder; floats use the shortest round-trip representation,
/// which keeps artifacts byte-stable across identical runs.
pub struct Csv {
    buf: String,
    columns: usize,
}

impl Csv {
    pub fn new(header: &[&str]) -> Csv {
        Csv { buf: format!("{}\n", header.join(",")), columns: header.len() }
    }

    pub fn row(&mut self, cells: &[CsvCell]) {
        assert_eq!(cells.len(), self.columns, "csv row width mismatch");
        for (i, cell) in cells.iter().enumerate() {
            if i > 0 {
                self.buf.push(',');
            }
            match cell {
                CsvCell::Float(v) => self.buf.push_str(&v.to_string()),
                CsvCell::Text(s) => self.buf.push_str(s),
            }
        }
        self.buf.push('\n');
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.buf.into_bytes()
    }
}

pub enum CsvCell<'a> {
    Float(f64),
    Text(&'a str),
}

impl<'a> From<f64> for CsvCell<'a> {
    fn from(v: f64) -> Self {
        CsvCell::Float(v)
    }
}

impl<'a> From<&'a str> for CsvCell<'a> {
    fn from(s: &'a str) -> Self {
        CsvCell::Text(s)
    }
}
