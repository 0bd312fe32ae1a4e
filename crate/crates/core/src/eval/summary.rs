use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::matrix::ExpressionMatrix;
use crate::miner::{Cluster, Orientation};
use crate::stats::pearson;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Spread {
    pub mean: f64,
    pub min: usize,
    pub max: usize,
}

impl Spread {
    fn of(xs: impl Iterator<Item = usize> + Clone) -> Self {
        let n = xs.clone().count();
        if n == 0 {
            return Self::default();
        }
        Self {
            mean: xs.clone().sum::<usize>() as f64 / n as f64,
            min: xs.clone().min().unwrap_or(0),
            max: xs.max().unwrap_or(0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterSummary {
    pub n_clusters: usize,
    pub genes: Spread,
    pub exps: Spread,
    /// Cluster count per `(n_genes, n_exps)`.
    pub density: BTreeMap<(usize, usize), usize>,
    /// Mean pairwise Pearson r per cluster, in input order.
    pub mean_pearson: Vec<Option<f64>>,
    /// Fraction of clusters with a defined mean r above 0.95.
    pub fraction_r_above_095: f64,
}

/// Mean Pearson r over all supporter pairs on the pattern's columns, with
/// backward supporters negated so anti-correlated rows count as coherent.
/// Pairs involving a constant row are skipped.
pub fn cluster_mean_pearson(cluster: &Cluster, matrix: &ExpressionMatrix) -> Option<f64> {
    let cols = cluster.pattern.cols();
    let profiles: Vec<Vec<f64>> = cluster
        .supporters
        .iter()
        .map(|s| {
            let row = matrix.row(s.row as usize);
            let sign = if s.orientation == Orientation::Backward { -1.0 } else { 1.0 };
            cols.iter().map(|&c| sign * row[c as usize]).collect()
        })
        .collect();
    let (mut sum, mut pairs) = (0.0, 0usize);
    for i in 0..profiles.len() {
        for j in i + 1..profiles.len() {
            if let Some(r) = pearson(&profiles[i], &profiles[j]) {
                sum += r;
                pairs += 1;
            }
        }
    }
    (pairs > 0).then(|| sum / pairs as f64)
}

pub fn summarize(clusters: &[Cluster], matrix: &ExpressionMatrix) -> ClusterSummary {
    let mut density = BTreeMap::new();
    for c in clusters {
        *density.entry((c.support(), c.pattern.len())).or_insert(0) += 1;
    }
    let mean_pearson: Vec<Option<f64>> =
        clusters.iter().map(|c| cluster_mean_pearson(c, matrix)).collect();
    let above = mean_pearson.iter().filter(|r| r.is_some_and(|r| r > 0.95)).count();
    ClusterSummary {
        n_clusters: clusters.len(),
        genes: Spread::of(clusters.iter().map(Cluster::support)),
        exps: Spread::of(clusters.iter().map(|c| c.pattern.len())),
        density,
        fraction_r_above_095: if clusters.is_empty() {
            0.0
        } else {
            above as f64 / clusters.len() as f64
        },
        mean_pearson,
    }
}
