//! Tab-separated expression matrices.
//!
//! ```text
//! gene    e1    e2    e3
//! g1      0.5   0.1   0.9
//! ```
//!
//! Lines starting with `#` and blank lines are ignored; CRLF is accepted.

use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use opsm_core::{ExpressionMatrix, MatrixError};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum MissingPolicy {
    /// Fail on the first missing or non-numeric cell.
    #[default]
    Reject,
    /// Drop every row holding such a cell.
    DropRows,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LoadReport {
    pub data_lines: usize,
    pub dropped: Vec<String>,
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("no header line")]
    NoHeader,
    #[error("malformed header on line {line}: {reason}")]
    Header { line: usize, reason: &'static str },
    #[error("line {line}: expected {expected} fields, found {found}")]
    Ragged { line: usize, expected: usize, found: usize },
    #[error("line {line}: empty row id")]
    EmptyRowId { line: usize },
    #[error("missing or non-numeric value {value:?} at row {row}, column {col}")]
    BadValue { row: String, col: String, value: String },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

fn fields(line: &str) -> Vec<&str> {
    line.strip_suffix('\r').unwrap_or(line).split('\t').collect()
}

fn parse_value(s: &str) -> Option<f64> {
    s.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

pub fn read_matrix<R: BufRead>(reader: R, policy: MissingPolicy) -> Result<(ExpressionMatrix, LoadReport), LoadError> {
    let mut lines = reader.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut next_content = || -> Result<Option<(usize, String)>, io::Error> {
        for (no, line) in lines.by_ref() {
            let line = line?;
            let t = line.trim_end_matches('\r');
            if !t.trim().is_empty() && !t.starts_with('#') {
                return Ok(Some((no, t.to_string())));
            }
        }
        Ok(None)
    };

    let (hline, header) = next_content()?.ok_or(LoadError::NoHeader)?;
    let head = fields(&header);
    if head.len() < 2 {
        return Err(LoadError::Header { line: hline, reason: "needs a row-id column and at least one experiment" });
    }
    let col_ids: Vec<String> = head[1..].iter().map(|s| s.trim().to_string()).collect();
    if col_ids.iter().any(String::is_empty) {
        return Err(LoadError::Header { line: hline, reason: "empty experiment label" });
    }
    let m = col_ids.len();

    let mut report = LoadReport::default();
    let (mut row_ids, mut values) = (Vec::new(), Vec::new());
    while let Some((no, line)) = next_content()? {
        report.data_lines += 1;
        let f = fields(&line);
        if f.len() != m + 1 {
            return Err(LoadError::Ragged { line: no, expected: m + 1, found: f.len() });
        }
        let id = f[0].trim();
        if id.is_empty() {
            return Err(LoadError::EmptyRowId { line: no });
        }
        let parsed: Result<Vec<f64>, usize> =
            f[1..].iter().enumerate().map(|(j, s)| parse_value(s).ok_or(j)).collect();
        match (parsed, policy) {
            (Ok(row), _) => {
                row_ids.push(id.to_string());
                values.extend(row);
            }
            (Err(j), MissingPolicy::Reject) => {
                return Err(LoadError::BadValue {
                    row: id.to_string(),
                    col: col_ids[j].clone(),
                    value: f[j + 1].to_string(),
                })
            }
            (Err(_), MissingPolicy::DropRows) => report.dropped.push(id.to_string()),
        }
    }
    Ok((ExpressionMatrix::new(row_ids, col_ids, values)?, report))
}

pub fn load_matrix(path: &Path, policy: MissingPolicy) -> Result<(ExpressionMatrix, LoadReport), LoadError> {
    read_matrix(BufReader::new(File::open(path)?), policy)
}

/// Writes `matrix` after `header` (already `#`-prefixed lines). Values use the
/// shortest representation that parses back to the same `f64`.
pub fn write_matrix<W: Write>(mut w: W, matrix: &ExpressionMatrix, header: &str) -> io::Result<()> {
    w.write_all(header.as_bytes())?;
    write!(w, "gene")?;
    for c in matrix.col_ids() {
        write!(w, "\t{c}")?;
    }
    writeln!(w)?;
    for (r, id) in matrix.row_ids().iter().enumerate() {
        write!(w, "{id}")?;
        for v in matrix.row(r) {
            write!(w, "\t{v}")?;
        }
        writeln!(w)?;
    }
    w.flush()
}
