//! Number formatting, trajectory tables and JSON serialization.

use std::io;
use std::path::Path;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::error::{CliError, CliResult};

/// Seventeen significant digits, enough to round-trip any `f64`.
pub fn fmt_num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "NaN".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// Pretty JSON whose floats are written with [`fmt_num`].
struct Sig17<'a>(PrettyFormatter<'a>);

impl Formatter for Sig17<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(fmt_num(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json<S: Serialize>(value: &S) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sig17(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("serializing to memory cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

pub fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

/// A trajectory: named columns, the first of which is time.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct TableJson<'a> {
    model: &'a str,
    method: &'a str,
    columns: &'a [String],
    rows: &'a [Vec<f64>],
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| fmt_num(*v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self, model: &str, method: &str) -> String {
        to_json(&TableJson { model, method, columns: &self.columns, rows: &self.rows })
    }

    /// Reads CSV or the JSON layout of [`Table::to_json`]. Empty input is an empty table.
    pub fn parse(text: &str) -> Result<Self, String> {
        let trimmed = text.trim_start();
        if trimmed.is_empty() {
            return Ok(Self { columns: Vec::new(), rows: Vec::new() });
        }
        if trimmed.starts_with('{') {
            return Self::parse_json(trimmed);
        }
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().expect("non-empty input has a line");
        let columns: Vec<String> = header.split(',').map(|s| s.trim().to_string()).collect();
        if columns.iter().any(|c| c.is_empty()) {
            return Err("empty column name in header".into());
        }
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            let row: Vec<f64> = line
                .split(',')
                .map(|c| c.trim().parse::<f64>().map_err(|_| format!("line {}: `{}` is not a number", i + 2, c.trim())))
                .collect::<Result<_, _>>()?;
            if row.len() != columns.len() {
                return Err(format!("line {}: {} fields, header has {}", i + 2, row.len(), columns.len()));
            }
            rows.push(row);
        }
        Ok(Self { columns, rows })
    }

    fn parse_json(text: &str) -> Result<Self, String> {
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let columns: Vec<String> = v
            .get("columns")
            .and_then(|c| c.as_array())
            .ok_or("missing `columns` array")?
            .iter()
            .map(|c| c.as_str().map(str::to_string).ok_or("column names must be strings"))
            .collect::<Result<_, _>>()?;
        let mut rows = Vec::new();
        for (i, r) in v.get("rows").and_then(|r| r.as_array()).ok_or("missing `rows` array")?.iter().enumerate() {
            let row: Vec<f64> = r
                .as_array()
                .ok_or(format!("row {i} is not an array"))?
                .iter()
                .map(|x| x.as_f64().ok_or(format!("row {i}: non-numeric entry")))
                .collect::<Result<_, _>>()?;
            if row.len() != columns.len() {
                return Err(format!("row {i}: {} entries, {} columns", row.len(), columns.len()));
            }
            rows.push(row);
        }
        Ok(Self { columns, rows })
    }
}
