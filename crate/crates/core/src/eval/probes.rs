use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::miner::Cluster;
use crate::stats::{
    cluster_shapes, permutation_pvalue, random_clusters_with, replicates, Infeasible, Tail,
};

/// Unordered pairs of rows in `rows` mapped to the same gene.
///
/// Rows without a gene (`None`) never pair.
pub fn redundant_pairs(rows: impl IntoIterator<Item = u32>, gene_of_row: &[Option<u32>]) -> usize {
    let mut genes: Vec<u32> = rows
        .into_iter()
        .filter_map(|r| gene_of_row.get(r as usize).copied().flatten())
        .collect();
    genes.sort_unstable();
    genes
        .chunk_by(|a, b| a == b)
        .map(|g| g.len() * (g.len() - 1) / 2)
        .sum()
}

/// Mean redundant pairs per cluster among clusters of one size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SizeRow {
    pub n_genes: usize,
    pub clusters: usize,
    pub observed_mean: f64,
    /// Averaged over all replicates.
    pub random_mean: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport {
    pub per_cluster: Vec<usize>,
    pub mean_pairs: f64,
    pub clusters_with_pair: usize,
    pub fraction_with_pair: f64,
    pub random_mean_pairs: f64,
    pub random_fraction_with_pair: f64,
    pub p_mean: f64,
    pub p_fraction: f64,
    pub by_size: Vec<SizeRow>,
    /// Rows with no gene mapping.
    pub unmapped_rows: usize,
    pub permutations: usize,
    pub seed: u64,
}

fn aggregate(counts: &[usize]) -> (f64, f64) {
    if counts.is_empty() {
        return (0.0, 0.0);
    }
    let n = counts.len() as f64;
    let sum: usize = counts.iter().sum();
    let with = counts.iter().filter(|&&c| c > 0).count();
    (sum as f64 / n, with as f64 / n)
}

/// Counts probe pairs of the same gene per cluster and compares the mean and
/// the fraction of clusters with at least one such pair against
/// `permutations` matched random cluster sets.
pub fn redundant_probe_analysis(
    clusters: &[Cluster],
    gene_of_row: &[Option<u32>],
    n_cols: usize,
    permutations: usize,
    seed: u64,
) -> Result<ProbeReport, Infeasible> {
    let n_rows = gene_of_row.len();
    let per_cluster: Vec<usize> = clusters
        .iter()
        .map(|c| redundant_pairs(c.rows(), gene_of_row))
        .collect();
    let (mean_pairs, fraction_with_pair) = aggregate(&per_cluster);

    let shapes = cluster_shapes(clusters);
    // Fail before spawning replicates.
    random_clusters_with(&shapes, n_rows, n_cols, &mut crate::stats::seeded_rng(seed))?;
    let null: Vec<Vec<usize>> = replicates(permutations, seed, |rng| {
        random_clusters_with(&shapes, n_rows, n_cols, rng)
            .expect("shapes checked")
            .iter()
            .map(|rc| redundant_pairs(rc.rows.iter().copied(), gene_of_row))
            .collect()
    });
    let (null_mean, null_fraction): (Vec<f64>, Vec<f64>) =
        null.iter().map(|counts| aggregate(counts)).unzip();
    let avg = |xs: &[f64]| if xs.is_empty() { 0.0 } else { xs.iter().sum::<f64>() / xs.len() as f64 };

    let mut sizes: BTreeMap<usize, (usize, usize, usize)> = BTreeMap::new();
    for (i, &(g, _)) in shapes.iter().enumerate() {
        let e = sizes.entry(g).or_default();
        e.0 += 1;
        e.1 += per_cluster[i];
        e.2 += null.iter().map(|counts| counts[i]).sum::<usize>();
    }
    let by_size = sizes
        .into_iter()
        .map(|(n_genes, (count, obs, rnd))| SizeRow {
            n_genes,
            clusters: count,
            observed_mean: obs as f64 / count as f64,
            random_mean: if permutations == 0 {
                0.0
            } else {
                rnd as f64 / (count * permutations) as f64
            },
        })
        .collect();

    Ok(ProbeReport {
        mean_pairs,
        clusters_with_pair: per_cluster.iter().filter(|&&c| c > 0).count(),
        fraction_with_pair,
        random_mean_pairs: avg(&null_mean),
        random_fraction_with_pair: avg(&null_fraction),
        p_mean: permutation_pvalue(mean_pairs, &null_mean, Tail::Greater),
        p_fraction: permutation_pvalue(fraction_with_pair, &null_fraction, Tail::Greater),
        by_size,
        unmapped_rows: gene_of_row.iter().filter(|g| g.is_none()).count(),
        per_cluster,
        permutations,
        seed,
    })
}
