use alloc::vec::Vec;

use hashbrown::HashMap;

use super::{is_subsequence, Cluster, Direction};

/// Index of retained clusters answering "is this cluster subsumed?".
///
/// A cluster `(P, S)` is subsumed by `(Q, T)` when `Q` is longer, `P` is an
/// order-preserving subsequence of `Q` (or of `Q` reversed when mining both
/// directions) and the rows of `S` are a subset of the rows of `T`.
///
/// Levels must be fed longest first. Subsumption is transitive, so testing
/// only against retained clusters is enough.
#[derive(Debug, Clone)]
pub struct SubsumptionIndex {
    direction: Direction,
    kept: Vec<Cluster>,
    by_row: HashMap<u32, Vec<u32>>,
    by_col: HashMap<u32, Vec<u32>>,
}

fn rows_subset(small: &Cluster, big: &Cluster) -> bool {
    let mut it = big.supporters.iter().map(|s| s.row);
    small
        .supporters
        .iter()
        .all(|s| it.by_ref().any(|r| r == s.row))
}

impl SubsumptionIndex {
    pub fn new(direction: Direction) -> Self {
        Self {
            direction,
            kept: Vec::new(),
            by_row: HashMap::new(),
            by_col: HashMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.kept.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kept.is_empty()
    }

    fn subsumes(&self, big: &Cluster, small: &Cluster) -> bool {
        if big.pattern.len() <= small.pattern.len()
            || big.supporters.len() < small.supporters.len()
            || !rows_subset(small, big)
        {
            return false;
        }
        let p = small.pattern.cols();
        let q = big.pattern.cols();
        is_subsequence(p.iter().copied(), q)
            || (self.direction == Direction::Both && is_subsequence(p.iter().rev().copied(), q))
    }

    pub fn is_subsumed(&self, c: &Cluster) -> bool {
        // Any subsumer holds every row and column of `c`; scan the shortest
        // posting list among them.
        let mut best: Option<&Vec<u32>> = None;
        let lists = c
            .rows()
            .map(|r| self.by_row.get(&r))
            .chain(c.pattern.cols().iter().map(|col| self.by_col.get(col)));
        for list in lists {
            match list {
                None => return false,
                Some(l) if best.is_none_or(|b| l.len() < b.len()) => best = Some(l),
                Some(_) => {}
            }
        }
        best.is_some_and(|list| {
            list.iter()
                .any(|&i| self.subsumes(&self.kept[i as usize], c))
        })
    }

    pub fn insert(&mut self, c: Cluster) {
        let i = self.kept.len() as u32;
        for r in c.rows() {
            self.by_row.entry(r).or_default().push(i);
        }
        for &col in c.pattern.cols() {
            self.by_col.entry(col).or_default().push(i);
        }
        self.kept.push(c);
    }

    /// Filters one level of equal-length clusters, retaining the survivors.
    ///
    /// Every already-retained cluster must be longer than this level.
    pub fn absorb_level(&mut self, level: Vec<Cluster>) {
        debug_assert!(level.windows(2).all(|w| w[0].pattern.len() == w[1].pattern.len()));
        let keep: Vec<bool> = {
            #[cfg(feature = "parallel")]
            {
                use rayon::prelude::*;
                level.par_iter().map(|c| !self.is_subsumed(c)).collect()
            }
            #[cfg(not(feature = "parallel"))]
            {
                level.iter().map(|c| !self.is_subsumed(c)).collect()
            }
        };
        for (c, k) in level.into_iter().zip(keep) {
            if k {
                self.insert(c);
            }
        }
    }

    pub fn into_clusters(self) -> Vec<Cluster> {
        self.kept
    }
}

/// Drops every cluster subsumed by a longer one.
pub fn redundancy_filter(mut clusters: Vec<Cluster>, direction: Direction) -> Vec<Cluster> {
    clusters.sort_by_key(|c| core::cmp::Reverse(c.pattern.len()));
    let mut index = SubsumptionIndex::new(direction);
    let mut level = Vec::new();
    for c in clusters {
        if level
            .last()
            .is_some_and(|l: &Cluster| l.pattern.len() != c.pattern.len())
        {
            index.absorb_level(core::mem::take(&mut level));
        }
        level.push(c);
    }
    index.absorb_level(level);
    index.into_clusters()
}
