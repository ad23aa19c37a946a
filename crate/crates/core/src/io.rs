//! Dense CSV matrices and atomic artifact output.
//!
//! A file is a rectangular grid of comma-separated fields. The first line is a
//! header if any of its fields fails to parse as a number; the first column is
//! a row-label column if its first data field does (so labelled files need a
//! header). Blank lines are skipped.
//! Values are written with 17 significant digits so they read back exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{RcaError, Result};
use crate::Matrix;

#[derive(Debug, Clone, PartialEq)]
pub struct CsvMatrix {
    pub header: Option<Vec<String>>,
    pub row_labels: Option<Vec<String>>,
    pub data: Matrix,
}

fn fields(line: &str) -> Vec<&str> {
    line.split(',').map(str::trim).collect()
}

fn is_number(cell: &str) -> bool {
    cell.parse::<f64>().is_ok()
}

/// Parses CSV text; line numbers in errors are 1-based.
pub fn parse_csv(text: &str) -> Result<CsvMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty())
        .peekable();

    let header = match lines.peek() {
        Some((_, first)) if fields(first).iter().any(|c| !is_number(c)) => {
            let (_, first) = lines.next().unwrap();
            Some(
                fields(first)
                    .into_iter()
                    .map(String::from)
                    .collect::<Vec<_>>(),
            )
        }
        _ => None,
    };
    let labelled = match lines.peek() {
        Some((_, first)) => !is_number(fields(first)[0]),
        None => return Err(RcaError::EmptyInput),
    };

    let mut width = None;
    let mut values = Vec::new();
    let mut labels = Vec::new();
    let mut rows = 0;
    for (line, text) in lines {
        let row = fields(text);
        let expected = *width.get_or_insert(row.len());
        if row.len() != expected {
            return Err(RcaError::RaggedRow {
                line,
                expected,
                found: row.len(),
            });
        }
        let numeric = if labelled {
            labels.push(row[0].to_string());
            &row[1..]
        } else {
            &row[..]
        };
        for (k, cell) in numeric.iter().enumerate() {
            let v: f64 = cell.parse().map_err(|_| RcaError::ParseCell {
                line,
                column: k + 1 + labelled as usize,
                cell: cell.to_string(),
            })?;
            if !v.is_finite() {
                return Err(RcaError::ParseCell {
                    line,
                    column: k + 1 + labelled as usize,
                    cell: cell.to_string(),
                });
            }
            values.push(v);
        }
        rows += 1;
    }
    let cols = width.unwrap_or(0) - labelled as usize;
    if rows == 0 || cols == 0 {
        return Err(RcaError::EmptyInput);
    }
    if let Some(h) = &header {
        if h.len() != cols + labelled as usize {
            return Err(RcaError::RaggedRow {
                line: 1,
                expected: cols + labelled as usize,
                found: h.len(),
            });
        }
    }
    Ok(CsvMatrix {
        header,
        row_labels: labelled.then_some(labels),
        data: Matrix::from_row_slice(rows, cols, &values),
    })
}

/// Reads and parses a CSV file; errors carry the path.
pub fn load_csv(path: &Path) -> Result<CsvMatrix> {
    let within = |e: RcaError| RcaError::File {
        path: path.to_path_buf(),
        source: Box::new(e),
    };
    let text = fs::read_to_string(path).map_err(|e| within(e.into()))?;
    parse_csv(&text).map_err(within)
}

/// Loads the numbers in a file as a flat list (row-major), e.g. a time vector
/// stored as one column or one row.
pub fn load_vector(path: &Path) -> Result<Vec<f64>> {
    let m = load_csv(path)?;
    Ok(m.data.transpose().iter().copied().collect())
}

/// Round-trip exact text form of a double.
pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

/// Renders a matrix as CSV with an optional header and row labels.
pub fn to_csv(data: &Matrix, header: Option<&[String]>, row_labels: Option<&[String]>) -> String {
    let mut out = String::new();
    if let Some(h) = header {
        out.push_str(&h.join(","));
        out.push('\n');
    }
    for i in 0..data.nrows() {
        let mut first = true;
        if let Some(labels) = row_labels {
            out.push_str(&labels[i]);
            first = false;
        }
        for j in 0..data.ncols() {
            if !first {
                out.push(',');
            }
            first = false;
            let _ = write!(out, "{}", format_value(data[(i, j)]));
        }
        out.push('\n');
    }
    out
}

/// Writes every `(file name, contents)` pair into `dir` so that either all
/// of them appear or none do: contents go to hidden temporary files first,
/// which are renamed only after every write succeeded.
pub fn write_all_atomic(dir: &Path, files: &[(String, String)]) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut staged: Vec<(PathBuf, PathBuf)> = Vec::with_capacity(files.len());
    let cleanup = |staged: &[(PathBuf, PathBuf)]| {
        for (tmp, _) in staged {
            let _ = fs::remove_file(tmp);
        }
    };
    for (name, contents) in files {
        let tmp = dir.join(format!(".{name}.tmp"));
        if let Err(e) = fs::write(&tmp, contents) {
            let _ = fs::remove_file(&tmp);
            cleanup(&staged);
            return Err(e.into());
        }
        staged.push((tmp, dir.join(name)));
    }
    for (i, (tmp, dest)) in staged.iter().enumerate() {
        if let Err(e) = fs::rename(tmp, dest) {
            cleanup(&staged[i..]);
            return Err(e.into());
        }
    }
    Ok(())
}
