//! Tabular results, their CSV and JSON renderings, and atomic file output.

use borel_wkb::C64;
use serde_json::{json, Value};
use std::io::Write;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// 17 significant digits, or `NaN` / `inf` / `-inf`.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

pub fn re_im(z: C64) -> [String; 2] {
    [num(z.re), num(z.im)]
}

/// A header and rows of preformatted cells, plus command parameters and an
/// optional payload for the JSON rendering.
pub struct Table {
    pub command: &'static str,
    pub params: Value,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub extra: Option<(&'static str, Value)>,
}

impl Table {
    pub fn new(command: &'static str, params: Value, columns: &[&'static str]) -> Self {
        Table { command, params, columns: columns.to_vec(), rows: Vec::new(), extra: None }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> Result<Vec<u8>, String> {
        match format {
            Format::Csv => {
                let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
                w.write_record(&self.columns).map_err(|e| e.to_string())?;
                for r in &self.rows {
                    w.write_record(r).map_err(|e| e.to_string())?;
                }
                w.into_inner().map_err(|e| e.to_string())
            }
            Format::Json => {
                let mut v = json!({
                    "command": self.command,
                    "params": self.params,
                    "columns": self.columns,
                    "rows": self.rows,
                });
                if let Some((k, x)) = &self.extra {
                    v[*k] = x.clone();
                }
                let mut out = serde_json::to_vec_pretty(&v).map_err(|e| e.to_string())?;
                out.push(b'\n');
                Ok(out)
            }
        }
    }
}

/// Writes through a temporary file in the target directory, renamed into
/// place once complete; standard output when no path is given.
pub fn write_output(bytes: &[u8], out: Option<&Path>) -> std::io::Result<()> {
    match out {
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(bytes)?;
            so.flush()
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(bytes)?;
            tmp.as_file().sync_all()?;
            tmp.persist(path).map_err(|e| e.error)?;
            Ok(())
        }
    }
}
