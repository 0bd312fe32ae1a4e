//! Exhaustive OPSM / GOPSM enumeration for small matrices.
//!
//! Every ordered column tuple of every admissible length is tested directly
//! with [`support_check`], then the same canonicalization and redundancy
//! removal as the miner are applied. This is the ground truth the beam search
//! must reproduce once `k` is large enough to keep every candidate.

use alloc::vec::Vec;

use thiserror::Error;

use crate::miner::{
    finalize, has_mixed_orientation, redundancy_filter, support_check, Cluster, Direction,
    MiningParams, Orientation, OrientedSupport, ParamError, Pattern,
};
use crate::sequencer::SequenceDatabase;

/// Largest number of ordered tuples the oracle will enumerate.
pub const MAX_TUPLES: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error("instance too large for exhaustive enumeration: {tuples} ordered tuples (limit {MAX_TUPLES})")]
    TooLarge { tuples: u128 },
}

/// `sum over l in min_len..=m of m! / (m - l)!`, saturating.
pub fn tuple_count(m: usize, min_len: usize) -> u128 {
    let mut total: u128 = 0;
    let mut falling: u128 = 1;
    for l in 1..=m {
        falling = falling.saturating_mul((m - l + 1) as u128);
        if l >= min_len {
            total = total.saturating_add(falling);
        }
    }
    total
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactMined {
    pub clusters: Vec<Cluster>,
    /// Ordered tuples visited, canonical or not.
    pub enumerated: u128,
}

struct Enumerator<'a> {
    db: &'a SequenceDatabase,
    params: &'a MiningParams,
    tuple: Vec<u32>,
    used: Vec<bool>,
    enumerated: u128,
    found: Vec<Cluster>,
}

impl Enumerator<'_> {
    fn visit(&mut self, target: usize) {
        if self.tuple.len() == target {
            self.enumerated += 1;
            self.evaluate();
            return;
        }
        for c in 0..self.db.n_cols() {
            if self.used[c] {
                continue;
            }
            self.used[c] = true;
            self.tuple.push(c as u32);
            self.visit(target);
            self.tuple.pop();
            self.used[c] = false;
        }
    }

    fn evaluate(&mut self) {
        let both = self.params.direction == Direction::Both;
        let pattern = Pattern::new(self.tuple.clone()).expect("distinct columns");
        if !pattern.is_canonical(self.params.direction) {
            return;
        }
        let mut supporters = Vec::new();
        for row in 0..self.db.n_rows() {
            let w = self.params.w;
            let hit = support_check(&self.tuple, row, self.db, w, Orientation::Forward)
                .map(|f| (Orientation::Forward, f))
                .or_else(|| {
                    both.then(|| support_check(&self.tuple, row, self.db, w, Orientation::Backward))
                        .flatten()
                        .map(|f| (Orientation::Backward, f))
                });
            if let Some((orientation, frontier)) = hit {
                supporters.push(OrientedSupport {
                    row: row as u32,
                    orientation,
                    frontier,
                });
            }
        }
        if supporters.len() >= self.params.min_rows {
            self.found.push(Cluster {
                id: 0,
                anti_correlated: has_mixed_orientation(&supporters),
                pattern,
                supporters,
            });
        }
    }
}

/// Enumerates every qualifying cluster exactly. `params.k` is ignored.
pub fn exact_mine(db: &SequenceDatabase, params: &MiningParams) -> Result<ExactMined, OracleError> {
    params.validate(db.n_cols())?;
    let tuples = tuple_count(db.n_cols(), params.min_cols);
    if tuples > MAX_TUPLES {
        return Err(OracleError::TooLarge { tuples });
    }
    let mut e = Enumerator {
        db,
        params,
        tuple: Vec::new(),
        used: alloc::vec![false; db.n_cols()],
        enumerated: 0,
        found: Vec::new(),
    };
    for len in params.min_cols..=db.n_cols() {
        e.visit(len);
    }
    let mut clusters = redundancy_filter(e.found, params.direction);
    finalize(&mut clusters, db);
    Ok(ExactMined {
        clusters,
        enumerated: e.enumerated,
    })
}
