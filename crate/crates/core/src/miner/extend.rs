use alloc::vec::Vec;

use hashbrown::HashSet;

use super::rank::TopK;
use super::{reverse_is_smaller, Direction, MiningParams, Orientation, OrientedSupport, Pattern};
use crate::sequencer::SequenceDatabase;

/// A pattern together with its exact oriented support set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub pattern: Pattern,
    /// Sorted by row.
    pub supporters: Vec<OrientedSupport>,
}

impl Candidate {
    pub fn support(&self) -> usize {
        self.supporters.len()
    }
}

pub(crate) trait Collector {
    fn admits(&self, support: usize) -> bool;
    fn count(&mut self);
    fn push(&mut self, cand: Candidate);
}

impl Collector for TopK {
    fn admits(&self, support: usize) -> bool {
        TopK::admits(self, support)
    }
    fn count(&mut self) {
        self.offered += 1;
    }
    fn push(&mut self, cand: Candidate) {
        TopK::push(self, cand)
    }
}

impl Collector for Vec<Candidate> {
    fn admits(&self, _: usize) -> bool {
        true
    }
    fn count(&mut self) {}
    fn push(&mut self, cand: Candidate) {
        Vec::push(self, cand)
    }
}

// Vote entries pack `row << 1 | backward`.
const BACKWARD: u32 = 1;

/// Per-worker buffers, reused across parents.
struct Scratch {
    append: Vec<Vec<u32>>,
    prepend: Vec<Vec<u32>>,
    touched_append: Vec<u32>,
    touched_prepend: Vec<u32>,
    oriented: Vec<u32>,
    other: Vec<u32>,
    merged: Vec<u32>,
}

impl Scratch {
    fn new(n_cols: usize) -> Self {
        Self {
            append: alloc::vec![Vec::new(); n_cols],
            prepend: alloc::vec![Vec::new(); n_cols],
            touched_append: Vec::new(),
            touched_prepend: Vec::new(),
            oriented: Vec::new(),
            other: Vec::new(),
            merged: Vec::new(),
        }
    }
}

#[inline]
fn vote(buckets: &mut [Vec<u32>], touched: &mut Vec<u32>, col: u32, entry: u32) {
    let b = &mut buckets[col as usize];
    if b.is_empty() {
        touched.push(col);
    }
    b.push(entry);
}

struct Level<'a> {
    db: &'a SequenceDatabase,
    params: &'a MiningParams,
    /// Canonical beam patterns; only needed when growing at both ends.
    beam: Option<HashSet<&'a [u32]>>,
}

impl<'a> Level<'a> {
    fn new(beam: &'a [Candidate], db: &'a SequenceDatabase, params: &'a MiningParams) -> Self {
        let index = (params.direction == Direction::Both)
            .then(|| beam.iter().map(|c| c.pattern.cols()).collect());
        Self {
            db,
            params,
            beam: index,
        }
    }

    fn expand<C: Collector>(&self, parent: &Candidate, s: &mut Scratch, out: &mut C) {
        let db = self.db;
        let (m, w) = (db.n_cols(), self.params.w);
        let cols = parent.pattern.cols();
        let l = cols.len();
        if l == 0 || l >= m {
            return;
        }
        let both = self.beam.is_some();

        for sup in &parent.supporters {
            let row = sup.row as usize;
            let seq = db.seq(row);
            let f = sup.frontier as usize;
            let tag = sup.row << 1;
            match sup.orientation {
                Orientation::Forward => {
                    for &c in &seq[f + 1..(f + w + 1).min(m)] {
                        vote(&mut s.append, &mut s.touched_append, c, tag);
                    }
                }
                Orientation::Backward => {
                    for &c in &seq[f.saturating_sub(w)..f] {
                        vote(&mut s.append, &mut s.touched_append, c, tag | BACKWARD);
                    }
                }
            }
            if both {
                // Growing at the front: the new element must precede the first
                // element in the supporter's own orientation.
                let g = if l == 1 { f } else { db.position(row, cols[0]) };
                match sup.orientation {
                    Orientation::Forward => {
                        for &c in &seq[g.saturating_sub(w)..g] {
                            vote(&mut s.prepend, &mut s.touched_prepend, c, tag);
                        }
                    }
                    Orientation::Backward => {
                        for &c in &seq[g + 1..(g + w + 1).min(m)] {
                            vote(&mut s.prepend, &mut s.touched_prepend, c, tag | BACKWARD);
                        }
                    }
                }
            }
        }

        let min_rows = self.params.min_rows;
        let mut touched_append = core::mem::take(&mut s.touched_append);
        let mut touched_prepend = core::mem::take(&mut s.touched_prepend);

        if both && l == 1 {
            // A single column reversed is itself, so both windows describe the
            // same pair: after-votes are forward for (first, c), before-votes
            // are forward for (c, first), i.e. backward for (first, c).
            let first = cols[0];
            let mut all_cols = touched_append.clone();
            all_cols.extend(touched_prepend.iter().copied());
            all_cols.sort_unstable();
            all_cols.dedup();
            for &c in &all_cols {
                let (after, before) = (&s.append[c as usize], &s.prepend[c as usize]);
                let support = after.len() + before.len();
                if support < min_rows {
                    continue;
                }
                s.merged.clear();
                merge_votes(after, before, &mut s.merged);
                s.oriented.clear();
                s.oriented.extend_from_slice(&[first, c]);
                self.offer(parent, &s.oriented, &mut s.other, true, &s.merged, out);
            }
        } else {
            for &c in &touched_append {
                let votes = &s.append[c as usize];
                if votes.len() >= min_rows {
                    s.oriented.clear();
                    s.oriented.extend_from_slice(cols);
                    s.oriented.push(c);
                    self.offer(parent, &s.oriented, &mut s.other, true, votes, out);
                }
            }
            for &c in &touched_prepend {
                let votes = &s.prepend[c as usize];
                if votes.len() >= min_rows {
                    s.oriented.clear();
                    s.oriented.push(c);
                    s.oriented.extend_from_slice(cols);
                    self.offer(parent, &s.oriented, &mut s.other, false, votes, out);
                }
            }
        }

        for &c in &touched_append {
            s.append[c as usize].clear();
        }
        for &c in &touched_prepend {
            s.prepend[c as usize].clear();
        }
        touched_append.clear();
        touched_prepend.clear();
        s.touched_append = touched_append;
        s.touched_prepend = touched_prepend;
    }

    /// Turns oriented pattern `x` plus its votes into a canonical candidate,
    /// if this parent owns it.
    #[allow(clippy::too_many_arguments)]
    fn offer<C: Collector>(
        &self,
        parent: &Candidate,
        x: &[u32],
        other_buf: &mut Vec<u32>,
        appended: bool,
        votes: &[u32],
        out: &mut C,
    ) {
        let l = x.len() - 1;
        let flip = self.beam.is_some() && reverse_is_smaller(x);

        // A class of length l+1 is reachable from both of its endpoint-drop
        // parents. Only the smaller one present in the beam reports it.
        if let Some(beam) = &self.beam {
            let other = if appended { &x[1..] } else { &x[..l] };
            other_buf.clear();
            if reverse_is_smaller(other) {
                other_buf.extend(other.iter().rev());
            } else {
                other_buf.extend_from_slice(other);
            }
            if other_buf.as_slice() < parent.pattern.cols() && beam.contains(other_buf.as_slice()) {
                return;
            }
        }

        out.count();
        if !out.admits(votes.len()) {
            return;
        }
        let cols: Vec<u32> = if flip {
            x.iter().rev().copied().collect()
        } else {
            x.to_vec()
        };
        let last = *cols.last().unwrap();
        let supporters = votes
            .iter()
            .map(|&v| {
                let row = v >> 1;
                let mut orientation = if v & BACKWARD == 0 {
                    Orientation::Forward
                } else {
                    Orientation::Backward
                };
                if flip {
                    orientation = orientation.flip();
                }
                OrientedSupport {
                    row,
                    orientation,
                    frontier: self.db.position(row as usize, last) as u32,
                }
            })
            .collect();
        out.push(Candidate {
            pattern: Pattern::from_vec_unchecked(cols),
            supporters,
        });
    }
}

/// Merges after-votes (kept) with before-votes (marked backward) by row.
fn merge_votes(after: &[u32], before: &[u32], out: &mut Vec<u32>) {
    let (mut i, mut j) = (0, 0);
    while i < after.len() || j < before.len() {
        let take_after = j == before.len() || (i < after.len() && after[i] >> 1 < before[j] >> 1);
        if take_after {
            out.push(after[i]);
            i += 1;
        } else {
            out.push(before[j] | BACKWARD);
            j += 1;
        }
    }
}

fn run<C, F, M>(beam: &[Candidate], db: &SequenceDatabase, params: &MiningParams, new: F, merge: M) -> C
where
    C: Collector + Send,
    F: Fn() -> C + Sync + Send,
    M: Fn(C, C) -> C + Sync + Send,
{
    let level = Level::new(beam, db, params);
    let m = db.n_cols();

    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        beam.par_iter()
            .with_min_len(8)
            .fold(
                || (Scratch::new(m), new()),
                |(mut s, mut out), parent| {
                    level.expand(parent, &mut s, &mut out);
                    (s, out)
                },
            )
            .map(|(_, out)| out)
            .reduce(&new, merge)
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = merge;
        let mut s = Scratch::new(m);
        let mut out = new();
        for parent in beam {
            level.expand(parent, &mut s, &mut out);
        }
        out
    }
}

/// Every next-level candidate reaching `min_rows`, sorted by pattern.
///
/// Candidates come from window votes only: each supporter of a beam pattern
/// proposes the `w` columns past the pattern's end (and, in both directions,
/// before its start). A candidate's support is exact as long as one of its
/// endpoint-drop parents is in `beam`.
pub fn extend_level(
    beam: &[Candidate],
    db: &SequenceDatabase,
    params: &MiningParams,
) -> Vec<Candidate> {
    let mut all = run(beam, db, params, Vec::new, |mut a, mut b| {
        a.append(&mut b);
        a
    });
    all.sort_unstable_by(|a, b| a.pattern.cmp(&b.pattern));
    all
}

/// The next beam plus the number of candidates that reached `min_rows`.
pub(crate) fn extend_level_topk(
    beam: &[Candidate],
    db: &SequenceDatabase,
    params: &MiningParams,
) -> (Vec<Candidate>, usize) {
    let top = run(beam, db, params, || TopK::new(params.k), TopK::merge);
    let offered = top.offered;
    (top.into_sorted(), offered)
}
