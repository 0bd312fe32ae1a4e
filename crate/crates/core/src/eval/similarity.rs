use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::miner::Cluster;
use crate::stats::{
    random_clusters_with, rank_sum, replicates, seeded_rng, Alternative, Infeasible,
    RankSumResult,
};

/// A label set with set semantics: sorted, no duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct LabelSet(Vec<u32>);

impl LabelSet {
    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn intersection_len(&self, other: &LabelSet) -> usize {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j, mut n) = (0, 0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                core::cmp::Ordering::Less => i += 1,
                core::cmp::Ordering::Greater => j += 1,
                core::cmp::Ordering::Equal => {
                    n += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        n
    }
}

impl FromIterator<u32> for LabelSet {
    fn from_iter<I: IntoIterator<Item = u32>>(iter: I) -> Self {
        let mut v: Vec<u32> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Self(v)
    }
}

/// Average number of shared labels over all unordered pairs:
/// `2 * sum |Li & Lj| / (N (N - 1))`. `None` when `N < 2`.
pub fn similarity_score(sets: &[&LabelSet]) -> Option<f64> {
    let n = sets.len();
    if n < 2 {
        return None;
    }
    let mut shared = 0usize;
    for i in 0..n {
        for j in i + 1..n {
            shared += sets[i].intersection_len(sets[j]);
        }
    }
    Some(2.0 * shared as f64 / (n * (n - 1)) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreCell {
    pub key: usize,
    pub clusters: usize,
    pub observed_mean: f64,
    pub random_clusters: usize,
    pub random_mean: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityReport {
    /// `(cluster_id, S)` for every scored cluster.
    pub per_cluster: Vec<(u32, f64)>,
    /// Ids of clusters with fewer than two genes.
    pub skipped: Vec<u32>,
    pub mean: f64,
    /// S of every random cluster across all replicate sets.
    pub random_scores: Vec<f64>,
    pub random_mean: f64,
    /// Observed scores against random scores, alternative "greater".
    pub rank_sum: RankSumResult,
    pub by_size: Vec<ScoreCell>,
    pub by_length: Vec<ScoreCell>,
    pub random_sets: usize,
    pub seed: u64,
}

fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        0.0
    } else {
        xs.iter().sum::<f64>() / xs.len() as f64
    }
}

fn breakdown(obs: &[((usize, usize), f64)], rnd: &[((usize, usize), f64)], key: fn(&(usize, usize)) -> usize) -> Vec<ScoreCell> {
    let mut cells: BTreeMap<usize, (usize, f64, usize, f64)> = BTreeMap::new();
    for (shape, s) in obs {
        let e = cells.entry(key(shape)).or_default();
        e.0 += 1;
        e.1 += s;
    }
    for (shape, s) in rnd {
        let e = cells.entry(key(shape)).or_default();
        e.2 += 1;
        e.3 += s;
    }
    let avg = |sum: f64, n: usize| if n == 0 { 0.0 } else { sum / n as f64 };
    cells
        .into_iter()
        .map(|(key, (n, sum, rn, rsum))| ScoreCell {
            key,
            clusters: n,
            observed_mean: avg(sum, n),
            random_clusters: rn,
            random_mean: avg(rsum, rn),
        })
        .collect()
}

/// Promoter similarity of each cluster against `random_sets` matched random
/// cluster sets. Rows beyond `labels` or without labels count as empty sets.
pub fn promoter_similarity(
    clusters: &[Cluster],
    labels: &[LabelSet],
    n_rows: usize,
    n_cols: usize,
    random_sets: usize,
    seed: u64,
) -> Result<SimilarityReport, Infeasible> {
    let empty = LabelSet::default();
    let label = |r: u32| labels.get(r as usize).unwrap_or(&empty);
    let score = |rows: &mut dyn Iterator<Item = u32>| {
        let sets: Vec<&LabelSet> = rows.map(label).collect();
        similarity_score(&sets)
    };

    let mut per_cluster = Vec::new();
    let mut skipped = Vec::new();
    let mut obs = Vec::new();
    let scored: Vec<&Cluster> = clusters.iter().filter(|c| c.support() >= 2).collect();
    for c in clusters {
        match score(&mut c.rows()) {
            Some(s) => {
                per_cluster.push((c.id, s));
                obs.push(((c.support(), c.pattern.len()), s));
            }
            None => skipped.push(c.id),
        }
    }

    let shapes: Vec<(usize, usize)> = scored.iter().map(|c| (c.support(), c.pattern.len())).collect();
    random_clusters_with(&shapes, n_rows, n_cols, &mut seeded_rng(seed))?;
    let rnd: Vec<((usize, usize), f64)> = replicates(random_sets, seed, |rng| {
        random_clusters_with(&shapes, n_rows, n_cols, rng)
            .expect("shapes checked")
            .iter()
            .zip(&shapes)
            .map(|(rc, &shape)| (shape, score(&mut rc.rows.iter().copied()).expect("N >= 2")))
            .collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect();

    let observed: Vec<f64> = obs.iter().map(|(_, s)| *s).collect();
    let random_scores: Vec<f64> = rnd.iter().map(|(_, s)| *s).collect();
    Ok(SimilarityReport {
        mean: mean(&observed),
        random_mean: mean(&random_scores),
        rank_sum: rank_sum(&observed, &random_scores, Alternative::Greater),
        by_size: breakdown(&obs, &rnd, |s| s.0),
        by_length: breakdown(&obs, &rnd, |s| s.1),
        per_cluster,
        skipped,
        random_scores,
        random_sets,
        seed,
    })
}
