use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::miner::Cluster;
use crate::stats::{
    cluster_shapes, permutation_pvalue, random_clusters_with, replicates, seeded_rng, Infeasible, Tail,
};

/// Clusters of one `(n_genes, n_exps)` shape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BreakdownCell {
    pub n_genes: usize,
    pub n_exps: usize,
    pub clusters: usize,
    pub mean_fraction: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NegativeReport {
    pub per_cluster: Vec<f64>,
    pub mean_fraction: f64,
    pub breakdown: Vec<BreakdownCell>,
    pub random_mean_fraction: f64,
    pub p: f64,
    pub permutations: usize,
    pub seed: u64,
}

fn fraction(rows: impl ExactSizeIterator<Item = u32>, is_negative: &[bool]) -> f64 {
    let n = rows.len();
    let neg = rows.filter(|&r| is_negative[r as usize]).count();
    if n == 0 {
        0.0
    } else {
        neg as f64 / n as f64
    }
}

fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        0.0
    } else {
        xs.iter().sum::<f64>() / xs.len() as f64
    }
}

/// Fraction of each cluster's rows that are negative controls, compared with
/// matched random clusters (a low fraction is the interesting direction).
pub fn negative_control_analysis(
    clusters: &[Cluster],
    is_negative: &[bool],
    n_cols: usize,
    permutations: usize,
    seed: u64,
) -> Result<NegativeReport, Infeasible> {
    let n_rows = is_negative.len();
    let per_cluster: Vec<f64> = clusters
        .iter()
        .map(|c| fraction(c.supporters.iter().map(|s| s.row), is_negative))
        .collect();
    let mean_fraction = mean(&per_cluster);

    let mut cells: BTreeMap<(usize, usize), (usize, f64)> = BTreeMap::new();
    for (c, &f) in clusters.iter().zip(&per_cluster) {
        let e = cells.entry((c.support(), c.pattern.len())).or_default();
        e.0 += 1;
        e.1 += f;
    }
    let breakdown = cells
        .into_iter()
        .map(|((n_genes, n_exps), (count, sum))| BreakdownCell {
            n_genes,
            n_exps,
            clusters: count,
            mean_fraction: sum / count as f64,
        })
        .collect();

    let shapes = cluster_shapes(clusters);
    random_clusters_with(&shapes, n_rows, n_cols, &mut seeded_rng(seed))?;
    let null: Vec<f64> = replicates(permutations, seed, |rng| {
        let set = random_clusters_with(&shapes, n_rows, n_cols, rng).expect("shapes checked");
        let fr: Vec<f64> = set
            .iter()
            .map(|rc| fraction(rc.rows.iter().copied(), is_negative))
            .collect();
        mean(&fr)
    });

    Ok(NegativeReport {
        p: permutation_pvalue(mean_fraction, &null, Tail::Less),
        random_mean_fraction: mean(&null),
        per_cluster,
        mean_fraction,
        breakdown,
        permutations,
        seed,
    })
}
