use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

/// `%.12g`: 12 significant digits, trailing zeros dropped.
pub fn fmt_g(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= DIGITS {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        trim_zeros(&format!("{:.*}", (DIGITS - 1 - exp) as usize, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// A table with a fixed header, written as CSV or as a JSON array of objects.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Debug, Clone)]
pub enum Cell {
    Num(f64),
    Int(usize),
    Bool(bool),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => fmt_g(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Num(x) => serde_json::json!(x),
            Cell::Int(i) => serde_json::json!(i),
            Cell::Bool(b) => serde_json::json!(b),
            Cell::Empty => serde_json::Value::Null,
        }
    }
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Self { header, rows: Vec::new() }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let obj: serde_json::Map<String, serde_json::Value> =
                    self.header.iter().zip(r).map(|(h, c)| (h.to_string(), c.json())).collect();
                serde_json::Value::Object(obj)
            })
            .collect();
        serde_json::Value::Array(rows)
    }

    fn write_csv<W: Write>(&self, w: W) -> Result<(), CliError> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.header).map_err(CliError::io)?;
        for r in &self.rows {
            out.write_record(r.iter().map(Cell::csv)).map_err(CliError::io)?;
        }
        out.flush().map_err(CliError::io)
    }
}

/// What a command produces: a table for CSV, and optionally a richer JSON document.
pub struct Report {
    pub table: Table,
    pub json: Option<serde_json::Value>,
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn emit(report: Report, format: Format, path: Option<&Path>) -> Result<(), CliError> {
    let mut w = sink(path)?;
    match format {
        Format::Csv => report.table.write_csv(&mut w)?,
        Format::Json => write_json(&mut w, &report.json.unwrap_or_else(|| report.table.to_json()))?,
    }
    w.flush().map_err(CliError::io)
}

fn write_json<W: Write>(w: &mut W, v: &serde_json::Value) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *w, v).map_err(CliError::io)?;
    writeln!(w).map_err(CliError::io)
}
