//! CSV and JSON emission with byte-stable formatting.
//!
//! Floats are printed with Rust's shortest round-trip formatting (never more
//! than 17 significant digits), so a given configuration always produces the
//! same bytes.  CSV uses a header row, commas, LF line endings and UTF-8;
//! JSON files mirror the CSV rows and carry a metadata object (config echo
//! plus version — no timestamps, which would break byte stability).

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde_json::{json, Value};

/// One CSV cell.
#[derive(Debug, Clone)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => fmt_f64(*v),
            Cell::Text(v) => v.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Float(v) => json!(v),
            Cell::Text(v) => json!(v),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

/// Shortest decimal that round-trips to the same f64.
pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

/// A rectangular table destined for `.csv` and/or `.json`.
#[derive(Debug, Clone)]
pub struct DataTable {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl DataTable {
    pub fn new(columns: Vec<&'static str>) -> Self {
        DataTable {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "ragged table row");
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::csv).collect();
            let _ = writeln!(out, "{}", line.join(","));
        }
        out
    }

    pub fn to_json(&self, metadata: Value) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| Value::Array(row.iter().map(Cell::json).collect()))
            .collect();
        json!({
            "metadata": metadata,
            "columns": self.columns,
            "rows": rows,
        })
    }
}

/// Writes `contents` to `path`, creating parent directories.
pub fn write_text(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)
            .with_context(|| format!("creating directory {}", parent.display()))?;
    }
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))?;
    log::info!("wrote {}", path.display());
    Ok(())
}

/// Serializes a JSON document with a trailing newline.
pub fn json_text(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable value");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_shortest() {
        assert_eq!(fmt_f64(0.0513551), "0.0513551");
        assert_eq!(fmt_f64(-0.0052161), "-0.0052161");
        assert_eq!(fmt_f64(1.0 / 3.0), "0.3333333333333333");
        let v: f64 = fmt_f64(0.1 + 0.2).parse().unwrap();
        assert_eq!(v, 0.1 + 0.2);
    }

    #[test]
    fn csv_layout_is_lf_only() {
        let mut t = DataTable::new(vec!["a", "b"]);
        t.push(vec![Cell::from(1i64), Cell::from(0.5)]);
        t.push(vec![Cell::from(2i64), Cell::from("x")]);
        assert_eq!(t.to_csv(), "a,b\n1,0.5\n2,x\n");
    }

    #[test]
    fn json_mirrors_rows_and_carries_metadata() {
        let mut t = DataTable::new(vec!["a"]);
        t.push(vec![Cell::from(0.25)]);
        let doc = t.to_json(json!({"version": "test"}));
        assert_eq!(doc["columns"][0], "a");
        assert_eq!(doc["rows"][0][0], 0.25);
        assert_eq!(doc["metadata"]["version"], "test");
        assert!(json_text(&doc).ends_with('\n'));
    }
}
