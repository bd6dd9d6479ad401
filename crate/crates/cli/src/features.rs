//! Feature-matrix and label files.
//!
//! CSV: UTF-8, no header, one sample per line, `,`-separated decimals.
//! JSON: an array of equal-length numeric arrays.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use adnf_core::{FeatureMatrix, Matrix};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    /// `.json` selects JSON; anything else is read as CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Csv,
        }
    }
}

fn parse_error(path: &Path, line: u64, message: impl Into<String>) -> CliError {
    CliError::Parse { path: path.to_path_buf(), line, message: message.into() }
}

fn into_features(path: &Path, rows: Vec<Vec<f64>>) -> Result<FeatureMatrix> {
    if rows.is_empty() {
        return Err(parse_error(path, 1, "no samples"));
    }
    let matrix = Matrix::from_rows(&rows)?;
    FeatureMatrix::new(matrix).map_err(|e| match e {
        adnf_core::Error::NonFinite { row, col } => {
            parse_error(path, row as u64 + 1, format!("non-finite value in column {}", col + 1))
        }
        other => CliError::Core(other),
    })
}

fn load_csv(path: &Path) -> Result<FeatureMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => CliError::io(path, io),
            other => CliError::Format { path: path.to_path_buf(), message: format!("{other:?}") },
        })?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width = None;
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_error(path, line, e.to_string())
        })?;
        let line = record.position().map_or(rows.len() as u64 + 1, |p| p.line());
        let row = record
            .iter()
            .enumerate()
            .map(|(col, field)| {
                field
                    .trim()
                    .parse::<f64>()
                    .map_err(|_| parse_error(path, line, format!("column {}: not a number: {field:?}", col + 1)))
            })
            .collect::<Result<Vec<f64>>>()?;
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(parse_error(path, line, format!("row has {} fields, expected {w}", row.len())));
            }
            _ => {}
        }
        rows.push(row);
    }
    into_features(path, rows)
}

fn load_json(path: &Path) -> Result<FeatureMatrix> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let rows: Vec<Vec<f64>> = serde_json::from_str(&text)
        .map_err(|e| parse_error(path, e.line() as u64, e.to_string()))?;
    if let Some(first) = rows.first() {
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != first.len()) {
            return Err(parse_error(path, i as u64 + 1, format!("row has {} values, expected {}", r.len(), first.len())));
        }
    }
    into_features(path, rows)
}

/// Reads a feature matrix; the format defaults to the file extension.
pub fn load_features(path: impl AsRef<Path>, format: Option<Format>) -> Result<FeatureMatrix> {
    let path = path.as_ref();
    match format.unwrap_or_else(|| Format::from_path(path)) {
        Format::Csv => load_csv(path),
        Format::Json => load_json(path),
    }
}

/// Writes a feature matrix. Values use the shortest representation that
/// parses back to the same `f64`.
pub fn save_features(path: impl AsRef<Path>, x: &FeatureMatrix) -> Result<()> {
    let path = path.as_ref();
    match Format::from_path(path) {
        Format::Json => {
            let rows: Vec<&[f64]> = x.iter_rows().collect();
            let file = File::create(path).map_err(|e| CliError::io(path, e))?;
            serde_json::to_writer(BufWriter::new(file), &rows)?;
            Ok(())
        }
        Format::Csv => {
            let file = File::create(path).map_err(|e| CliError::io(path, e))?;
            let mut w = BufWriter::new(file);
            write_csv(&mut w, x).map_err(|e| CliError::io(path, e))
        }
    }
}

pub fn write_csv<W: Write>(w: &mut W, x: &FeatureMatrix) -> std::io::Result<()> {
    for row in x.iter_rows() {
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    w.flush()
}

/// One non-negative integer label per line.
pub fn load_labels(path: impl AsRef<Path>) -> Result<Vec<usize>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            l.trim()
                .parse::<usize>()
                .map_err(|_| parse_error(path, i as u64 + 1, format!("not a label: {l:?}")))
        })
        .collect()
}

pub fn write_labels<W: Write + ?Sized>(w: &mut W, labels: &[usize]) -> std::io::Result<()> {
    for l in labels {
        writeln!(w, "{l}")?;
    }
    w.flush()
}

pub fn save_labels(path: impl AsRef<Path>, labels: &[usize]) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    write_labels(&mut BufWriter::new(file), labels).map_err(|e| CliError::io(path, e))
}
