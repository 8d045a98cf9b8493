//! Tabular results and their CSV / JSON serialization.

use serde_json::{json, Map, Value};

use crate::format::{format_sig, round_sig};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
}

impl Cell {
    fn csv(&self, precision: usize) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Num(x) if x.is_finite() => format_sig(*x, precision),
            Cell::Num(_) => String::new(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self, precision: usize) -> Value {
        match self {
            Cell::Int(i) => json!(i),
            Cell::Num(x) if x.is_finite() => json!(round_sig(*x, precision)),
            Cell::Num(_) => Value::Null,
            Cell::Text(s) => json!(s),
        }
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v.into())
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self, precision: usize) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| c.csv(precision)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    fn json_rows(&self, precision: usize) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .columns
                        .iter()
                        .cloned()
                        .zip(row.iter().map(|c| c.json(precision)))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

/// Output of one command: a primary table, an optional fit table and
/// run metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub metadata: Map<String, Value>,
    pub table: Table,
    pub fits: Option<Table>,
}

impl Report {
    pub fn to_csv(&self, precision: usize) -> String {
        self.table.to_csv(precision)
    }

    pub fn fits_csv(&self, precision: usize) -> Option<String> {
        self.fits.as_ref().map(|f| f.to_csv(precision))
    }

    pub fn to_json(&self, precision: usize) -> String {
        let mut doc = Map::new();
        doc.insert("metadata".into(), Value::Object(self.metadata.clone()));
        doc.insert("columns".into(), json!(self.table.columns));
        doc.insert("rows".into(), self.table.json_rows(precision));
        if let Some(fits) = &self.fits {
            doc.insert(
                "fits".into(),
                json!({ "columns": fits.columns, "rows": fits.json_rows(precision) }),
            );
        }
        let mut text = serde_json::to_string_pretty(&Value::Object(doc)).expect("JSON serializes");
        text.push('\n');
        text
    }
}

/// Parsed CSV: header and raw fields of a single table.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    /// Reads the first table of `text` (stops at the first blank line).
    pub fn parse(text: &str) -> Option<Self> {
        let mut lines = text.lines();
        let header = lines.next()?;
        let columns: Vec<String> = header.split(',').map(String::from).collect();
        let rows = lines
            .take_while(|l| !l.trim().is_empty())
            .map(|l| l.split(',').map(String::from).collect())
            .collect();
        Some(CsvTable { columns, rows })
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }
}
