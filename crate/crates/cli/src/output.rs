use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use clap::ValueEnum;
use num_rational::BigRational;
use selectlab_core::exact::rational_to_f64;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    /// Raw little-endian f64 values (sample only).
    Bin,
}

pub fn open(out: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// `p/q`, also for integers.
pub fn fraction(value: &BigRational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Decimal with 15 significant digits, switching to exponent form for very
/// large or small magnitudes.
pub fn decimal(value: f64) -> String {
    if value == 0.0 || !value.is_finite() {
        return format!("{value}");
    }
    let magnitude = value.abs().log10().floor() as i32;
    if !(-5..15).contains(&magnitude) {
        return format!("{value:.14e}");
    }
    let places = (14 - magnitude).max(0) as usize;
    let text = format!("{value:.places$}");
    if text.contains('.') {
        text.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        text
    }
}

pub enum Cell {
    Int(u64),
    Float(f64),
    Exact(BigRational),
    Text(String),
}

impl Cell {
    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Float(v) if v.is_finite() => Value::from(*v),
            Cell::Float(_) => Value::Null,
            Cell::Exact(v) => Value::from(fraction(v)),
            Cell::Text(v) => Value::from(v.as_str()),
        }
    }
}

/// Rows with named columns. Exact columns expand to a decimal column and a
/// `<name>_frac` column in CSV.
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> io::Result<()> {
        match format {
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let object: Map<String, Value> = self
                            .columns
                            .iter()
                            .zip(row)
                            .map(|(name, cell)| (name.to_string(), cell.json()))
                            .collect();
                        Value::Object(object)
                    })
                    .collect();
                write_json(&Value::Array(rows), out)
            }
            _ => {
                let mut writer = csv::Writer::from_writer(out);
                let exact: Vec<bool> = (0..self.columns.len())
                    .map(|c| self.rows.iter().any(|row| matches!(row[c], Cell::Exact(_))))
                    .collect();
                let mut header = Vec::new();
                for (name, &is_exact) in self.columns.iter().zip(&exact) {
                    header.push(name.to_string());
                    if is_exact {
                        header.push(format!("{name}_frac"));
                    }
                }
                writer.write_record(&header)?;
                for row in &self.rows {
                    let mut record = Vec::with_capacity(header.len());
                    for (cell, &is_exact) in row.iter().zip(&exact) {
                        match cell {
                            Cell::Int(v) => record.push(v.to_string()),
                            Cell::Float(v) => record.push(decimal(*v)),
                            Cell::Exact(v) => {
                                record.push(decimal(rational_to_f64(v)));
                                record.push(fraction(v));
                            }
                            Cell::Text(v) => record.push(v.clone()),
                        }
                        if is_exact && !matches!(cell, Cell::Exact(_)) {
                            record.push(String::new());
                        }
                    }
                    writer.write_record(&record)?;
                }
                writer.flush()
            }
        }
    }
}

pub fn write_json(value: &Value, out: &mut dyn Write) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)
}

/// Key/value pairs as a two-column CSV or a flat JSON object.
pub fn write_pairs(pairs: &[(&str, Cell)], format: Format, out: &mut dyn Write) -> io::Result<()> {
    match format {
        Format::Json => {
            let object: Map<String, Value> =
                pairs.iter().map(|(k, v)| (k.to_string(), v.json())).collect();
            write_json(&Value::Object(object), out)
        }
        _ => {
            let mut table = Table::new(vec!["name", "value"]);
            for (k, v) in pairs {
                let value = match v {
                    Cell::Int(i) => Cell::Text(i.to_string()),
                    Cell::Float(f) => Cell::Text(decimal(*f)),
                    Cell::Exact(r) => Cell::Text(fraction(r)),
                    Cell::Text(t) => Cell::Text(t.clone()),
                };
                table.push(vec![Cell::Text(k.to_string()), value]);
            }
            table.write(Format::Csv, out)
        }
    }
}
