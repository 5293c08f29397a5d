//! Result tables and their CSV/JSON files.
//!
//! Files are written to a temporary sibling and renamed into place, so a
//! failed run never leaves a partial file behind. Wall-clock runtime is kept
//! out of the files to make identical configs give byte-identical output.

use std::io::Write;
use std::path::Path;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::config::OutputFormat;
use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub kind: String,
    pub solution: String,
    pub config: serde_json::Value,
    pub version: String,
    #[serde(skip)]
    pub runtime: Duration,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub metadata: Metadata,
}

impl ResultTable {
    pub fn new(columns: &[&str], metadata: Metadata) -> Self {
        ResultTable {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            metadata,
        }
    }

    pub fn push(&mut self, row: Vec<f64>) -> Result<(), CliError> {
        if row.len() != self.columns.len() {
            return Err(CliError::Solver(format!(
                "row has {} values for {} columns",
                row.len(),
                self.columns.len()
            )));
        }
        if let Some(v) = row.iter().find(|v| !v.is_finite()) {
            return Err(CliError::Solver(format!("non-finite value {v} in row {row:?}")));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Io(e.to_string());
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| format!("{v:.16e}"))).map_err(io)?;
        }
        w.into_inner().map_err(|e| CliError::Io(e.to_string()))
    }

    pub fn to_json(&self) -> Result<Vec<u8>, CliError> {
        let mut out = serde_json::to_vec_pretty(self).map_err(|e| CliError::Io(e.to_string()))?;
        out.push(b'\n');
        Ok(out)
    }

    /// Writes the table atomically in the given format.
    pub fn write(&self, path: &Path, format: OutputFormat) -> Result<(), CliError> {
        let bytes = match format {
            OutputFormat::Csv => self.to_csv()?,
            OutputFormat::Json => self.to_json()?,
        };
        let dir = match path.parent() {
            Some(d) if !d.as_os_str().is_empty() => d,
            _ => Path::new("."),
        };
        let with_path = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
        let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(with_path)?;
        tmp.write_all(&bytes).map_err(with_path)?;
        tmp.as_file().sync_all().map_err(with_path)?;
        tmp.persist(path).map_err(|e| with_path(e.error))?;
        Ok(())
    }
}

/// Header and rows of a CSV file written by [`ResultTable::write`].
pub fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>), CliError> {
    let io = |e: csv::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut r = csv::Reader::from_path(path).map_err(io)?;
    let columns = r.headers().map_err(io)?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for record in r.records() {
        let record = record.map_err(io)?;
        let row = record
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|e| CliError::Parse(format!("{}: `{f}`: {e}", path.display())))
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Ok((columns, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> ResultTable {
        let meta = Metadata {
            kind: "test".into(),
            solution: "t".into(),
            config: serde_json::Value::Null,
            version: "0".into(),
            runtime: Duration::ZERO,
        };
        let mut t = ResultTable::new(&["t", "v"], meta);
        for i in 0..50 {
            let x = 0.1 * i as f64;
            t.push(vec![x, (x * 1.7).sin() / 3.0 + 1e-300 * x]).unwrap();
        }
        t
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        let t = table();
        t.write(&path, OutputFormat::Csv).unwrap();
        let (columns, rows) = read_csv(&path).unwrap();
        assert_eq!(columns, t.columns);
        assert_eq!(rows, t.rows);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let t = table();
        let back: ResultTable = serde_json::from_slice(&t.to_json().unwrap()).unwrap();
        assert_eq!(back.rows, t.rows);
    }

    #[test]
    fn rejects_bad_rows() {
        let mut t = table();
        assert!(t.push(vec![1.0]).is_err());
        assert!(t.push(vec![1.0, f64::NAN]).is_err());
    }

    #[test]
    fn failed_write_leaves_no_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("missing").join("out.csv");
        assert!(table().write(&path, OutputFormat::Csv).is_err());
        assert!(!path.exists());
    }
}
