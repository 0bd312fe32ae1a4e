//! Synthetic matrices with planted order-preserving structure.

use alloc::vec::Vec;

use rand::Rng;
use thiserror::Error;

use crate::matrix::{default_col_ids, default_row_ids, ExpressionMatrix, MatrixError};
use crate::stats::seeded_rng;

/// `n x m` matrix of i.i.d. uniform(0, 1) values, distinct within each row.
pub fn random_matrix(n: usize, m: usize, seed: u64) -> Result<ExpressionMatrix, MatrixError> {
    let mut rng = seeded_rng(seed);
    let mut values = Vec::with_capacity(n * m);
    for _ in 0..n {
        let start = values.len();
        for _ in 0..m {
            let v = loop {
                let v: f64 = rng.gen();
                if !values[start..].contains(&v) {
                    break v;
                }
            };
            values.push(v);
        }
    }
    ExpressionMatrix::new(default_row_ids(n), default_col_ids(m), values)
}

/// One planted OPSM: `rows` order `cols` as listed, `reversed` rows in reverse.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Plant {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub reversed: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlantError {
    #[error("row {0} out of bounds")]
    RowOutOfBounds(usize),
    #[error("column {0} out of bounds")]
    ColOutOfBounds(usize),
    #[error("row {0} listed twice")]
    DuplicateRow(usize),
    #[error("column {0} listed twice")]
    DuplicateCol(usize),
    #[error("reversed row {0} is not a planted row")]
    ReversedNotPlanted(usize),
    #[error("cell ({row}, {col}) is already planted")]
    Overlap { row: usize, col: usize },
    #[error("separation must be finite and positive, got {0}")]
    Separation(f64),
}

/// Plants OPSMs into a matrix, refusing requests that reuse a planted cell.
#[derive(Debug, Clone)]
pub struct Planter {
    matrix: ExpressionMatrix,
    planted: Vec<bool>,
    plants: Vec<Plant>,
    sep: f64,
}

fn check_unique(xs: &[usize], bound: usize, oob: fn(usize) -> PlantError, dup: fn(usize) -> PlantError) -> Result<(), PlantError> {
    let mut seen = alloc::vec![false; bound];
    for &x in xs {
        if x >= bound {
            return Err(oob(x));
        }
        if core::mem::replace(&mut seen[x], true) {
            return Err(dup(x));
        }
    }
    Ok(())
}

impl Planter {
    pub fn new(matrix: ExpressionMatrix, sep: f64) -> Result<Self, PlantError> {
        if !(sep.is_finite() && sep > 0.0) {
            return Err(PlantError::Separation(sep));
        }
        let cells = matrix.n_rows() * matrix.n_cols();
        Ok(Self {
            matrix,
            planted: alloc::vec![false; cells],
            plants: Vec::new(),
            sep,
        })
    }

    /// Overwrites each planted row's `cols` with an arithmetic ramp of step
    /// `sep` placed above both 1 and every other value in the row, so the
    /// planted columns occupy the row's last positions in planted order.
    pub fn plant(&mut self, plant: Plant) -> Result<(), PlantError> {
        let (n, m) = (self.matrix.n_rows(), self.matrix.n_cols());
        check_unique(&plant.rows, n, PlantError::RowOutOfBounds, PlantError::DuplicateRow)?;
        check_unique(&plant.cols, m, PlantError::ColOutOfBounds, PlantError::DuplicateCol)?;
        check_unique(&plant.reversed, n, PlantError::RowOutOfBounds, PlantError::DuplicateRow)?;
        if let Some(&r) = plant.reversed.iter().find(|r| !plant.rows.contains(r)) {
            return Err(PlantError::ReversedNotPlanted(r));
        }
        for &r in &plant.rows {
            for &c in &plant.cols {
                if self.planted[r * m + c] {
                    return Err(PlantError::Overlap { row: r, col: c });
                }
            }
        }

        let len = plant.cols.len();
        for &r in &plant.rows {
            let base = self
                .matrix
                .row(r)
                .iter()
                .enumerate()
                .filter(|(c, _)| !plant.cols.contains(c))
                .map(|(_, &v)| v)
                .fold(1.0f64, f64::max);
            let reversed = plant.reversed.contains(&r);
            for (i, &c) in plant.cols.iter().enumerate() {
                let step = if reversed { len - i } else { i + 1 };
                self.matrix.set(r, c, base + self.sep * step as f64);
                self.planted[r * m + c] = true;
            }
        }
        self.plants.push(plant);
        Ok(())
    }

    pub fn plants(&self) -> &[Plant] {
        &self.plants
    }

    pub fn matrix(&self) -> &ExpressionMatrix {
        &self.matrix
    }

    pub fn into_parts(self) -> (ExpressionMatrix, Vec<Plant>) {
        (self.matrix, self.plants)
    }
}

/// Single-plant convenience over [`Planter`].
pub fn plant_opsm(matrix: ExpressionMatrix, plant: Plant, sep: f64) -> Result<ExpressionMatrix, PlantError> {
    let mut p = Planter::new(matrix, sep)?;
    p.plant(plant)?;
    Ok(p.into_parts().0)
}
