//! Validated expression matrix: genes as rows, experiments as columns.

use alloc::string::String;
use alloc::vec::Vec;

use hashbrown::HashSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("matrix needs at least 2 rows, found {0}")]
    TooFewRows(usize),
    #[error("matrix needs at least 2 columns, found {0}")]
    TooFewCols(usize),
    #[error("duplicate row id `{0}`")]
    DuplicateRowId(String),
    #[error("duplicate column id `{0}`")]
    DuplicateColId(String),
    #[error("expected {expected} values for a {rows}x{cols} matrix, found {found}")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        expected: usize,
        found: usize,
    },
    #[error("non-finite value at row `{row}`, column `{col}`")]
    NonFinite { row: String, col: String },
}

/// An `n x m` matrix of finite values with unique row and column labels.
///
/// Values are stored row-major. Construction validates every invariant, so a
/// live `ExpressionMatrix` is always at least `2 x 2`, finite, and uniquely
/// labelled.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpressionMatrix {
    row_ids: Vec<String>,
    col_ids: Vec<String>,
    values: Vec<f64>,
}

fn first_duplicate(ids: &[String]) -> Option<String> {
    let mut seen = HashSet::with_capacity(ids.len());
    ids.iter().find(|id| !seen.insert(id.as_str())).cloned()
}

impl ExpressionMatrix {
    pub fn new(
        row_ids: Vec<String>,
        col_ids: Vec<String>,
        values: Vec<f64>,
    ) -> Result<Self, MatrixError> {
        let (n, m) = (row_ids.len(), col_ids.len());
        if n < 2 {
            return Err(MatrixError::TooFewRows(n));
        }
        if m < 2 {
            return Err(MatrixError::TooFewCols(m));
        }
        if values.len() != n * m {
            return Err(MatrixError::ShapeMismatch {
                rows: n,
                cols: m,
                expected: n * m,
                found: values.len(),
            });
        }
        if let Some(id) = first_duplicate(&row_ids) {
            return Err(MatrixError::DuplicateRowId(id));
        }
        if let Some(id) = first_duplicate(&col_ids) {
            return Err(MatrixError::DuplicateColId(id));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(MatrixError::NonFinite {
                row: row_ids[i / m].clone(),
                col: col_ids[i % m].clone(),
            });
        }
        Ok(Self {
            row_ids,
            col_ids,
            values,
        })
    }

    /// Builds a matrix from nested rows, labelling rows `g0..` and columns `e0..`.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, MatrixError> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        let mut values = Vec::with_capacity(n * m);
        for row in rows {
            if row.len() != m {
                return Err(MatrixError::ShapeMismatch {
                    rows: n,
                    cols: m,
                    expected: n * m,
                    found: values.len() + row.len(),
                });
            }
            values.extend_from_slice(row);
        }
        Self::new(default_row_ids(n), default_col_ids(m), values)
    }

    pub fn n_rows(&self) -> usize {
        self.row_ids.len()
    }

    pub fn n_cols(&self) -> usize {
        self.col_ids.len()
    }

    pub fn row_ids(&self) -> &[String] {
        &self.row_ids
    }

    pub fn col_ids(&self) -> &[String] {
        &self.col_ids
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row(&self, row: usize) -> &[f64] {
        let m = self.n_cols();
        &self.values[row * m..(row + 1) * m]
    }

    pub fn value(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.n_cols() + col]
    }

    /// Applies `f` to every value of one row. The result must stay finite.
    pub fn map_row(&mut self, row: usize, mut f: impl FnMut(usize, f64) -> f64) {
        let m = self.n_cols();
        for (c, v) in self.values[row * m..(row + 1) * m].iter_mut().enumerate() {
            *v = f(c, *v);
            debug_assert!(v.is_finite());
        }
    }

    pub(crate) fn set(&mut self, row: usize, col: usize, value: f64) {
        let m = self.n_cols();
        self.values[row * m + col] = value;
    }
}

pub fn default_row_ids(n: usize) -> Vec<String> {
    (0..n).map(|i| alloc::format!("g{i}")).collect()
}

pub fn default_col_ids(m: usize) -> Vec<String> {
    (0..m).map(|j| alloc::format!("e{j}")).collect()
}
