//! Tabular output shared by the solvers: CSV with `#` comment headers, or
//! JSON with the same columns.

use std::fmt::Display;
use std::io::Write;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::{Error, Result};

pub fn serialize_display<T: Display, S: Serializer>(value: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(value)
}

pub fn serialize_complex<S: Serializer>(value: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [value.re, value.im].serialize(s)
}

/// Output format of a [`Table`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Parse {
                what: "output.format".into(),
                message: format!("expected csv or json, got '{other}'"),
            }),
        }
    }
}

impl Display for Format {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

/// A table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Bool(bool),
    Text(String),
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

impl From<i32> for Cell {
    fn from(v: i32) -> Self {
        Cell::Int(v.into())
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl Display for Cell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            // `Display` for f64 is the shortest string that round-trips.
            Cell::Float(v) => write!(f, "{v}"),
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Bool(v) => write!(f, "{}", u8::from(*v)),
            Cell::Text(v) => f.write_str(v),
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Cell::Float(v) if v.is_finite() => s.serialize_f64(*v),
            Cell::Float(v) => s.collect_str(v),
            Cell::Int(v) => s.serialize_i64(*v),
            Cell::Bool(v) => s.serialize_bool(*v),
            Cell::Text(v) => s.serialize_str(v),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
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
        assert_eq!(row.len(), self.columns.len(), "row width does not match header");
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Writes the table. `header` lines are emitted as `# ` comments in CSV
    /// and as a `header` array in JSON.
    pub fn write<W: Write>(&self, mut w: W, format: Format, header: &[String]) -> Result<()> {
        match format {
            Format::Csv => {
                for line in header {
                    writeln!(w, "# {line}")?;
                }
                writeln!(w, "{}", self.columns.join(","))?;
                for row in &self.rows {
                    let line: Vec<String> = row.iter().map(|c| csv_escape(&c.to_string())).collect();
                    writeln!(w, "{}", line.join(","))?;
                }
            }
            Format::Json => {
                let rows: Vec<serde_json::Map<String, serde_json::Value>> = self
                    .rows
                    .iter()
                    .map(|row| {
                        self.columns
                            .iter()
                            .cloned()
                            .zip(row.iter().map(|c| serde_json::to_value(c).unwrap_or_default()))
                            .collect()
                    })
                    .collect();
                let doc = serde_json::json!({ "header": header, "columns": self.columns, "rows": rows });
                serde_json::to_writer_pretty(&mut w, &doc).map_err(std::io::Error::from)?;
                writeln!(w)?;
            }
        }
        Ok(())
    }

    pub fn to_csv_string(&self, header: &[String]) -> String {
        let mut buf = Vec::new();
        self.write(&mut buf, Format::Csv, header).expect("writing to memory");
        String::from_utf8(buf).expect("utf-8 table")
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

/// Parses a CSV table written by [`Table::write`], returning comment lines
/// and raw cells.
pub fn read_csv(text: &str) -> Result<(Vec<String>, Vec<String>, Vec<Vec<String>>)> {
    let mut header = Vec::new();
    let mut columns = None;
    let mut rows = Vec::new();
    for line in text.lines() {
        if let Some(c) = line.strip_prefix('#') {
            header.push(c.strip_prefix(' ').unwrap_or(c).to_owned());
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let cells = split_csv(line);
        if columns.is_none() {
            columns = Some(cells);
        } else {
            rows.push(cells);
        }
    }
    let columns = columns.ok_or_else(|| Error::Parse {
        what: "csv".into(),
        message: "missing column header".into(),
    })?;
    Ok((header, columns, rows))
}

fn split_csv(line: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut quoted = false;
    let mut chars = line.chars().peekable();
    while let Some(ch) = chars.next() {
        match ch {
            '"' if quoted && chars.peek() == Some(&'"') => {
                cur.push('"');
                chars.next();
            }
            '"' => quoted = !quoted,
            ',' if !quoted => out.push(std::mem::take(&mut cur)),
            _ => cur.push(ch),
        }
    }
    out.push(cur);
    out
}
