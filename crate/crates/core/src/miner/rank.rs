use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::Candidate;

/// Beam order: more support first, then the lexicographically smaller pattern.
pub fn rank_cmp(a: &Candidate, b: &Candidate) -> Ordering {
    b.supporters
        .len()
        .cmp(&a.supporters.len())
        .then_with(|| a.pattern.cmp(&b.pattern))
}

/// The best `k` candidates in beam order.
pub fn rank_topk(mut candidates: Vec<Candidate>, k: usize) -> Vec<Candidate> {
    candidates.sort_by(rank_cmp);
    candidates.truncate(k);
    candidates
}

/// Heap entry whose maximum is the worst-ranked candidate.
struct Worst(Candidate);

impl PartialEq for Worst {
    fn eq(&self, other: &Self) -> bool {
        rank_cmp(&self.0, &other.0) == Ordering::Equal
    }
}

impl Eq for Worst {}

impl PartialOrd for Worst {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Worst {
    fn cmp(&self, other: &Self) -> Ordering {
        rank_cmp(&self.0, &other.0)
    }
}

/// Streaming top-k selector. Merging two selectors keeps the top `k` of the
/// union, so partial selections from parallel workers combine in any order.
pub(crate) struct TopK {
    k: usize,
    heap: BinaryHeap<Worst>,
    pub(crate) offered: usize,
}

impl TopK {
    pub(crate) fn new(k: usize) -> Self {
        Self {
            k,
            heap: BinaryHeap::new(),
            offered: 0,
        }
    }

    /// Cheap pre-check: could a candidate with this support enter?
    #[inline]
    pub(crate) fn admits(&self, support: usize) -> bool {
        self.heap.len() < self.k
            || self
                .heap
                .peek()
                .is_some_and(|w| support >= w.0.supporters.len())
    }

    pub(crate) fn push(&mut self, cand: Candidate) {
        if self.heap.len() < self.k {
            self.heap.push(Worst(cand));
        } else if let Some(mut worst) = self.heap.peek_mut() {
            if rank_cmp(&cand, &worst.0) == Ordering::Less {
                *worst = Worst(cand);
            }
        }
    }

    pub(crate) fn merge(mut self, other: TopK) -> TopK {
        self.offered += other.offered;
        for c in other.heap {
            self.push(c.0);
        }
        self
    }

    pub(crate) fn into_sorted(self) -> Vec<Candidate> {
        let mut v: Vec<Candidate> = self.heap.into_iter().map(|w| w.0).collect();
        v.sort_by(rank_cmp);
        v
    }
}
