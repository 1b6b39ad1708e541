use std::fmt;
use std::io::Write;
use std::path::Path;

use serde_json::Value;

use crate::Format;

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Library(zpfsim::Error),
    Io(std::io::Error),
    /// A check run by the command did not hold.
    Check(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Library(zpfsim::Error::NumericalInstability(_)) => 4,
            Failure::Library(_) => 3,
            Failure::Io(_) | Failure::Check(_) => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Library(e) => write!(f, "{e}"),
            Failure::Io(e) => write!(f, "i/o error: {e}"),
            Failure::Check(m) => write!(f, "check failed: {m}"),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

/// Tabular result with a header row.
#[derive(Debug, Default)]
pub struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// A command's result, renderable in either format.
pub struct Report {
    pub json: Value,
    pub table: Option<Table>,
    pub default_format: Format,
}

impl Report {
    pub fn render(&self, format: Option<Format>) -> Result<String, Failure> {
        match format.unwrap_or(self.default_format) {
            Format::Json => {
                let mut text =
                    serde_json::to_string_pretty(&self.json).map_err(|e| Failure::Io(e.into()))?;
                text.push('\n');
                Ok(text)
            }
            Format::Csv => self
                .table
                .as_ref()
                .map(Table::to_csv)
                .ok_or_else(|| Failure::Usage("this command has no CSV form".into())),
        }
    }
}

/// Writes the whole document at once, so failed runs leave no file behind.
pub fn emit(text: &str, path: Option<&Path>) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Shortest round-trip decimal form.
/// Shortest round-trip form, in exponent notation outside `[1e-4, 1e15)`.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}
