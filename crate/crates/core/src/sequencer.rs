//! Matrix to sequence-database transform.
//!
//! Each row is replaced by the permutation of column indices that sorts it in
//! ascending order. Equal values keep ascending column order, and every such
//! tie-broken adjacent pair is counted so callers can surface how much of the
//! ordering was arbitrary.

use alloc::vec::Vec;

use thiserror::Error;

use crate::matrix::ExpressionMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequenceError {
    #[error("row {row} has {found} entries, expected {expected}")]
    Length {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("row {row} is not a permutation of 0..{n_cols}")]
    NotPermutation { row: usize, n_cols: usize },
    #[error("a sequence database needs at least one row and one column")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceDatabase {
    n_rows: usize,
    n_cols: usize,
    seq: Vec<u32>,
    pos: Vec<u32>,
    tie_counts: Vec<u32>,
}

impl SequenceDatabase {
    /// Builds a database directly from per-row column permutations.
    pub fn from_sequences(n_cols: usize, rows: &[Vec<u32>]) -> Result<Self, SequenceError> {
        if rows.is_empty() || n_cols == 0 {
            return Err(SequenceError::Empty);
        }
        let n_rows = rows.len();
        let mut seq = Vec::with_capacity(n_rows * n_cols);
        let mut pos = alloc::vec![u32::MAX; n_rows * n_cols];
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n_cols {
                return Err(SequenceError::Length {
                    row: r,
                    expected: n_cols,
                    found: row.len(),
                });
            }
            let inverse = &mut pos[r * n_cols..(r + 1) * n_cols];
            for (i, &c) in row.iter().enumerate() {
                let slot = inverse
                    .get_mut(c as usize)
                    .filter(|p| **p == u32::MAX)
                    .ok_or(SequenceError::NotPermutation { row: r, n_cols })?;
                *slot = i as u32;
            }
            seq.extend_from_slice(row);
        }
        Ok(Self {
            n_rows,
            n_cols,
            seq,
            pos,
            tie_counts: alloc::vec![0; n_rows],
        })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    /// Column indices of `row` in ascending value order.
    #[inline]
    pub fn seq(&self, row: usize) -> &[u32] {
        &self.seq[row * self.n_cols..(row + 1) * self.n_cols]
    }

    /// Inverse of [`seq`](Self::seq): `pos(row)[c]` is where column `c` sits.
    #[inline]
    pub fn pos(&self, row: usize) -> &[u32] {
        &self.pos[row * self.n_cols..(row + 1) * self.n_cols]
    }

    #[inline]
    pub fn position(&self, row: usize, col: u32) -> usize {
        self.pos[row * self.n_cols + col as usize] as usize
    }

    pub fn tie_count(&self, row: usize) -> u32 {
        self.tie_counts[row]
    }

    pub fn tie_counts(&self) -> &[u32] {
        &self.tie_counts
    }

    pub fn tie_summary(&self) -> TieSummary {
        TieSummary {
            rows_with_ties: self.tie_counts.iter().filter(|&&t| t > 0).count(),
            tied_pairs: self.tie_counts.iter().map(|&t| t as u64).sum(),
            max_in_row: self.tie_counts.iter().copied().max().unwrap_or(0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TieSummary {
    pub rows_with_ties: usize,
    pub tied_pairs: u64,
    pub max_in_row: u32,
}

fn sort_row(values: &[f64], seq: &mut [u32], pos: &mut [u32]) -> u32 {
    for (i, s) in seq.iter_mut().enumerate() {
        *s = i as u32;
    }
    // Stable sort keeps ascending column order among equal values.
    seq.sort_by(|&a, &b| values[a as usize].total_cmp(&values[b as usize]));
    let mut ties = 0;
    for (i, &c) in seq.iter().enumerate() {
        pos[c as usize] = i as u32;
        if i > 0 && values[seq[i - 1] as usize] == values[c as usize] {
            ties += 1;
        }
    }
    ties
}

/// Sorts every row of `matrix` into a column permutation.
pub fn to_sequence_db(matrix: &ExpressionMatrix) -> SequenceDatabase {
    let (n, m) = (matrix.n_rows(), matrix.n_cols());
    let mut seq = alloc::vec![0u32; n * m];
    let mut pos = alloc::vec![0u32; n * m];
    let mut tie_counts = alloc::vec![0u32; n];

    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        seq.par_chunks_mut(m)
            .zip(pos.par_chunks_mut(m))
            .zip(tie_counts.par_iter_mut())
            .enumerate()
            .for_each(|(r, ((s, p), t))| *t = sort_row(matrix.row(r), s, p));
    }
    #[cfg(not(feature = "parallel"))]
    for (r, ((s, p), t)) in seq
        .chunks_mut(m)
        .zip(pos.chunks_mut(m))
        .zip(tie_counts.iter_mut())
        .enumerate()
    {
        *t = sort_row(matrix.row(r), s, p);
    }

    SequenceDatabase {
        n_rows: n,
        n_cols: m,
        seq,
        pos,
        tie_counts,
    }
}
