//! Label-to-index resolution for clusters read back from disk.

use std::collections::HashMap;

use opsm_core::miner::{has_mixed_orientation, OrientedSupport, Pattern};
use opsm_core::{Cluster, ExpressionMatrix, SequenceDatabase};
use thiserror::Error;

use crate::clusters_tsv::ClusterRecord;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ResolveError {
    #[error("cluster {cluster}: unknown gene {id}")]
    UnknownRow { cluster: u32, id: String },
    #[error("cluster {cluster}: unknown experiment {id}")]
    UnknownCol { cluster: u32, id: String },
    #[error("cluster {cluster}: experiment listed twice in pattern")]
    RepeatedCol { cluster: u32 },
}

/// The row and column label spaces clusters are resolved against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universe {
    row_ids: Vec<String>,
    col_ids: Vec<String>,
    rows: HashMap<String, u32>,
    cols: HashMap<String, u32>,
}

fn index(ids: &[String]) -> HashMap<String, u32> {
    ids.iter().enumerate().map(|(i, s)| (s.clone(), i as u32)).collect()
}

fn dedup_in_order(ids: impl IntoIterator<Item = String>) -> Vec<String> {
    let mut seen = std::collections::HashSet::new();
    ids.into_iter().filter(|s| seen.insert(s.clone())).collect()
}

impl Universe {
    pub fn from_matrix(m: &ExpressionMatrix) -> Self {
        Self::new(m.row_ids().to_vec(), m.col_ids().to_vec())
    }

    /// Labels in order of first appearance; repeats are ignored.
    pub fn from_labels(rows: impl IntoIterator<Item = String>, cols: impl IntoIterator<Item = String>) -> Self {
        Self::new(dedup_in_order(rows), dedup_in_order(cols))
    }

    fn new(row_ids: Vec<String>, col_ids: Vec<String>) -> Self {
        Self { rows: index(&row_ids), cols: index(&col_ids), row_ids, col_ids }
    }

    /// Every label appearing in `records`, rows then columns in file order.
    pub fn of_records(records: &[ClusterRecord]) -> (Vec<String>, Vec<String>) {
        let rows = records.iter().flat_map(|r| r.genes.iter().map(|g| g.0.clone())).collect();
        let cols = records.iter().flat_map(|r| r.pattern.iter().cloned()).collect();
        (rows, cols)
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

    pub fn row(&self, id: &str) -> Option<u32> {
        self.rows.get(id).copied()
    }

    pub fn col(&self, id: &str) -> Option<u32> {
        self.cols.get(id).copied()
    }

    /// Turns records into clusters. Frontiers are filled in from `db` when
    /// given (it must be built from the same matrix), otherwise left at 0.
    pub fn resolve(&self, records: &[ClusterRecord], db: Option<&SequenceDatabase>) -> Result<Vec<Cluster>, ResolveError> {
        records
            .iter()
            .map(|rec| {
                let cols = rec
                    .pattern
                    .iter()
                    .map(|c| self.col(c).ok_or_else(|| ResolveError::UnknownCol { cluster: rec.id, id: c.clone() }))
                    .collect::<Result<Vec<u32>, _>>()?;
                let last = *cols.last().expect("patterns are nonempty");
                let pattern = Pattern::new(cols).ok_or(ResolveError::RepeatedCol { cluster: rec.id })?;
                let mut supporters = rec
                    .genes
                    .iter()
                    .map(|(g, o)| {
                        let row = self.row(g).ok_or_else(|| ResolveError::UnknownRow { cluster: rec.id, id: g.clone() })?;
                        let frontier = db.map_or(0, |db| db.position(row as usize, last) as u32);
                        Ok(OrientedSupport { row, orientation: *o, frontier })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                supporters.sort_by_key(|s| s.row);
                Ok(Cluster {
                    id: rec.id,
                    anti_correlated: has_mixed_orientation(&supporters),
                    pattern,
                    supporters,
                })
            })
            .collect()
    }
}
