//! Level-wise top-k beam search for OPSM / GOPSM patterns.
//!
//! Level 1 holds every single column, supported by every row. Each level is
//! grown by window voting ([`extend_level`]): a supporter of a beam pattern
//! proposes the columns found within `w` sequence positions past the pattern
//! endpoint, so a level costs `O(k * support * w)` rather than testing every
//! column. The best `k` candidates ([`rank_topk`]) form the next beam; every
//! beam pattern long enough is emitted, and [`redundancy_filter`] removes
//! emitted clusters subsumed by a longer one at the end.
//!
//! With [`Direction::Both`] a pattern and its reverse are the same cluster.
//! Only the lexicographically smaller of the two is stored, rows that order it
//! in reverse carry [`Orientation::Backward`], and patterns are grown at both
//! ends so every class stays reachable from a beam parent.

mod extend;
mod rank;
mod redundancy;
mod support;

use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::sequencer::{SequenceDatabase, TieSummary};

pub use extend::{extend_level, Candidate};
pub use rank::{rank_cmp, rank_topk};
pub use redundancy::{redundancy_filter, SubsumptionIndex};
pub use support::support_check;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    /// Only rows inducing the pattern's own order support it.
    Forward,
    /// Rows inducing the exact reverse order also support it (GOPSM).
    Both,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Forward => "forward",
            Direction::Both => "both",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    Forward,
    Backward,
}

impl Orientation {
    pub fn flip(self) -> Self {
        match self {
            Orientation::Forward => Orientation::Backward,
            Orientation::Backward => Orientation::Forward,
        }
    }

    pub fn sign(self) -> char {
        match self {
            Orientation::Forward => '+',
            Orientation::Backward => '-',
        }
    }
}

/// A row supporting a pattern, and how.
///
/// `frontier` is the position, in the row's sequence, of the pattern's last
/// element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OrientedSupport {
    pub row: u32,
    pub orientation: Orientation,
    pub frontier: u32,
}

/// An ordered list of distinct column indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Pattern(Vec<u32>);

impl Pattern {
    /// Wraps `cols`, returning `None` if a column repeats.
    pub fn new(cols: Vec<u32>) -> Option<Self> {
        let mut sorted = cols.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some(Self(cols))
    }

    pub(crate) fn from_vec_unchecked(cols: Vec<u32>) -> Self {
        Self(cols)
    }

    pub fn cols(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> Self {
        Self(self.0.iter().rev().copied().collect())
    }

    /// Whether this is the stored representative of its class.
    pub fn is_canonical(&self, direction: Direction) -> bool {
        direction == Direction::Forward || !reverse_is_smaller(&self.0)
    }

    /// The class representative, and whether it is the reverse of `self`.
    pub fn canonical(&self, direction: Direction) -> (Self, bool) {
        if self.is_canonical(direction) {
            (self.clone(), false)
        } else {
            (self.reversed(), true)
        }
    }

    /// True if `self` occurs in `other` as an order-preserving subsequence.
    pub fn is_subsequence_of(&self, other: &Pattern) -> bool {
        is_subsequence(self.0.iter().copied(), &other.0)
    }
}

impl From<Pattern> for Vec<u32> {
    fn from(p: Pattern) -> Self {
        p.0
    }
}

pub(crate) fn is_subsequence(mut needle: impl Iterator<Item = u32>, hay: &[u32]) -> bool {
    let mut next = needle.next();
    for &c in hay {
        match next {
            None => return true,
            Some(x) if x == c => next = needle.next(),
            Some(_) => {}
        }
    }
    next.is_none()
}

/// `reverse(cols) < cols` lexicographically.
pub(crate) fn reverse_is_smaller(cols: &[u32]) -> bool {
    cols.iter().rev().lt(cols.iter())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cluster {
    pub id: u32,
    pub pattern: Pattern,
    /// Sorted by row.
    pub supporters: Vec<OrientedSupport>,
    pub anti_correlated: bool,
}

impl Cluster {
    pub fn support(&self) -> usize {
        self.supporters.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = u32> + '_ {
        self.supporters.iter().map(|s| s.row)
    }

    pub(crate) fn from_candidate(c: Candidate) -> Self {
        let anti = has_mixed_orientation(&c.supporters);
        Cluster {
            id: 0,
            pattern: c.pattern,
            supporters: c.supporters,
            anti_correlated: anti,
        }
    }
}

/// Whether the supporters read the pattern in both directions.
pub fn has_mixed_orientation(s: &[OrientedSupport]) -> bool {
    let back = s
        .iter()
        .filter(|x| x.orientation == Orientation::Backward)
        .count();
    back > 0 && back < s.len()
}

/// Prepares filtered clusters for output.
///
/// Each cluster is read in the direction most of its supporters follow; on a
/// tie the canonical (lexicographically smaller) reading stays. Clusters are
/// then sorted by (pattern length, pattern) and numbered from 1.
pub fn finalize(clusters: &mut [Cluster], db: &SequenceDatabase) {
    for c in clusters.iter_mut() {
        let back = c
            .supporters
            .iter()
            .filter(|s| s.orientation == Orientation::Backward)
            .count();
        if 2 * back > c.supporters.len() {
            c.pattern = c.pattern.reversed();
            let last = *c.pattern.cols().last().unwrap();
            for s in &mut c.supporters {
                s.orientation = s.orientation.flip();
                s.frontier = db.position(s.row as usize, last) as u32;
            }
        }
    }
    clusters.sort_by(|a, b| {
        a.pattern
            .len()
            .cmp(&b.pattern.len())
            .then_with(|| a.pattern.cmp(&b.pattern))
    });
    for (i, c) in clusters.iter_mut().enumerate() {
        c.id = i as u32 + 1;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("k must be at least 1")]
    BeamWidth,
    #[error("w must be in [1, m] (got w={w}, m={m})")]
    Window { w: usize, m: usize },
    #[error("min-genes must be at least 2 (got {0})")]
    MinRows(usize),
    #[error("min-exps must be in [2, m] (got {min_cols}, m={m})")]
    MinCols { min_cols: usize, m: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MiningParams {
    /// Patterns retained per level.
    pub k: usize,
    /// Maximum sequence-position gap between consecutive pattern elements.
    pub w: usize,
    pub min_rows: usize,
    pub min_cols: usize,
    pub direction: Direction,
}

impl MiningParams {
    pub fn validate(&self, n_cols: usize) -> Result<(), ParamError> {
        if self.k == 0 {
            return Err(ParamError::BeamWidth);
        }
        if self.w == 0 || self.w > n_cols {
            return Err(ParamError::Window {
                w: self.w,
                m: n_cols,
            });
        }
        if self.min_rows < 2 {
            return Err(ParamError::MinRows(self.min_rows));
        }
        if self.min_cols < 2 || self.min_cols > n_cols {
            return Err(ParamError::MinCols {
                min_cols: self.min_cols,
                m: n_cols,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LevelStats {
    /// Pattern length at this level.
    pub length: usize,
    /// Candidates that reached `min_rows` before beam truncation.
    pub candidates: usize,
    pub beam: usize,
    pub emitted: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchReport {
    pub params: MiningParams,
    pub n_rows: usize,
    pub n_cols: usize,
    pub levels: Vec<LevelStats>,
    pub emitted: usize,
    pub ties: TieSummary,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MineReport {
    pub search: SearchReport,
    /// Clusters left after redundancy removal.
    pub retained: usize,
}

/// Receives each level's emitted clusters during [`search`].
pub trait LevelSink {
    type Error;
    fn accept(&mut self, length: usize, clusters: Vec<Cluster>) -> Result<(), Self::Error>;
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError<E> {
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error("emission sink failed: {0}")]
    Sink(E),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MineError {
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error("emitted cluster cap of {cap} exceeded at pattern length {length} ({emitted} clusters)")]
    CapExceeded {
        cap: usize,
        length: usize,
        emitted: usize,
    },
}

/// Keeps emitted levels in memory, failing once more than `cap` clusters
/// have accumulated.
#[derive(Debug, Default)]
pub struct MemorySink {
    cap: Option<usize>,
    levels: Vec<(usize, Vec<Cluster>)>,
    total: usize,
}

impl MemorySink {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_cap(cap: usize) -> Self {
        Self {
            cap: Some(cap),
            ..Self::default()
        }
    }

    pub fn into_levels(self) -> Vec<(usize, Vec<Cluster>)> {
        self.levels
    }
}

impl LevelSink for MemorySink {
    type Error = MineError;

    fn accept(&mut self, length: usize, clusters: Vec<Cluster>) -> Result<(), MineError> {
        self.total += clusters.len();
        if let Some(cap) = self.cap {
            if self.total > cap {
                return Err(MineError::CapExceeded {
                    cap,
                    length,
                    emitted: self.total,
                });
            }
        }
        self.levels.push((length, clusters));
        Ok(())
    }
}

fn seed_level(db: &SequenceDatabase, params: &MiningParams) -> Vec<Candidate> {
    if db.n_rows() < params.min_rows {
        return Vec::new();
    }
    let seeds = (0..db.n_cols() as u32)
        .map(|c| Candidate {
            pattern: Pattern(alloc::vec![c]),
            supporters: (0..db.n_rows())
                .map(|r| OrientedSupport {
                    row: r as u32,
                    orientation: Orientation::Forward,
                    frontier: db.position(r, c) as u32,
                })
                .collect(),
        })
        .collect();
    rank_topk(seeds, params.k)
}

/// Runs the beam search, handing every level's emitted patterns to `sink`.
///
/// No redundancy removal happens here; see [`mine`].
pub fn search<S: LevelSink>(
    db: &SequenceDatabase,
    params: &MiningParams,
    sink: &mut S,
) -> Result<SearchReport, SearchError<S::Error>> {
    params.validate(db.n_cols())?;
    let mut report = SearchReport {
        params: *params,
        n_rows: db.n_rows(),
        n_cols: db.n_cols(),
        levels: Vec::new(),
        emitted: 0,
        ties: db.tie_summary(),
    };

    let mut beam = seed_level(db, params);
    let mut stats = LevelStats {
        length: 1,
        candidates: if beam.is_empty() { 0 } else { db.n_cols() },
        beam: beam.len(),
        emitted: 0,
    };
    let mut length = 1;
    loop {
        if length >= params.min_cols && !beam.is_empty() {
            let clusters: Vec<Cluster> = beam.iter().cloned().map(Cluster::from_candidate).collect();
            stats.emitted = clusters.len();
            report.emitted += clusters.len();
            sink.accept(length, clusters).map_err(SearchError::Sink)?;
        }
        report.levels.push(stats);
        if beam.is_empty() || length == db.n_cols() {
            break;
        }
        let (next, candidates) = extend::extend_level_topk(&beam, db, params);
        length += 1;
        stats = LevelStats {
            length,
            candidates,
            beam: next.len(),
            emitted: 0,
        };
        beam = next;
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mined {
    pub clusters: Vec<Cluster>,
    pub report: MineReport,
}

/// Mines, removes redundant clusters and numbers the survivors.
pub fn mine(db: &SequenceDatabase, params: &MiningParams) -> Result<Mined, MineError> {
    mine_with_sink(db, params, MemorySink::new())
}

/// As [`mine`], but fails once more than `cap` clusters have been emitted.
pub fn mine_capped(
    db: &SequenceDatabase,
    params: &MiningParams,
    cap: usize,
) -> Result<Mined, MineError> {
    mine_with_sink(db, params, MemorySink::with_cap(cap))
}

fn mine_with_sink(
    db: &SequenceDatabase,
    params: &MiningParams,
    mut sink: MemorySink,
) -> Result<Mined, MineError> {
    let search = search(db, params, &mut sink).map_err(|e| match e {
        SearchError::Params(p) => MineError::Params(p),
        SearchError::Sink(s) => s,
    })?;
    let emitted: Vec<Cluster> = sink
        .into_levels()
        .into_iter()
        .flat_map(|(_, c)| c)
        .collect();
    let mut clusters = redundancy_filter(emitted, params.direction);
    finalize(&mut clusters, db);
    Ok(Mined {
        report: MineReport {
            search,
            retained: clusters.len(),
        },
        clusters,
    })
}
