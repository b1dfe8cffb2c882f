//! Plot-ready tables: CSV with nine significant digits, or JSON with the resolved config.

use std::fmt::Write as _;

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v.into())
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

fn csv_cell(c: &Cell, out: &mut String) {
    match c {
        Cell::Num(v) if v.is_finite() => write!(out, "{v:.8e}").expect("string write"),
        Cell::Num(v) if v.is_nan() => out.push_str("nan"),
        Cell::Num(v) => out.push_str(if *v > 0.0 { "inf" } else { "-inf" }),
        Cell::Int(i) => write!(out, "{i}").expect("string write"),
        Cell::Text(s) if s.contains([',', '"', '\n']) => {
            write!(out, "\"{}\"", s.replace('"', "\"\"")).expect("string write")
        }
        Cell::Text(s) => out.push_str(s),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table { columns: columns.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Comma-separated, header row, LF line endings.
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            for (i, c) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                csv_cell(c, &mut out);
            }
            out.push('\n');
        }
        out
    }

    /// `{"config": ..., "columns": [...], "rows": [[...]]}`; non-finite numbers become null.
    pub fn to_json(&self, config: &serde_json::Value) -> String {
        let rows: Vec<Vec<serde_json::Value>> = self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|c| match c {
                        Cell::Num(v) => serde_json::Number::from_f64(*v).map_or(serde_json::Value::Null, serde_json::Value::Number),
                        Cell::Int(i) => (*i).into(),
                        Cell::Text(s) => s.clone().into(),
                    })
                    .collect()
            })
            .collect();
        let doc = serde_json::json!({ "config": config, "columns": self.columns, "rows": rows });
        let mut s = serde_json::to_string_pretty(&doc).expect("json");
        s.push('\n');
        s
    }
}
