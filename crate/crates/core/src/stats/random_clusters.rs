use alloc::vec::Vec;

use rand::seq::index::sample;
use rand::Rng;
use thiserror::Error;

use super::seeded_rng;
use crate::miner::Cluster;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomCluster {
    /// Sorted row indices.
    pub rows: Vec<u32>,
    /// Sorted column indices.
    pub cols: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomClusterSet {
    pub clusters: Vec<RandomCluster>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot draw a {genes}x{exps} cluster from a {n_rows}x{n_cols} matrix")]
pub struct Infeasible {
    pub genes: usize,
    pub exps: usize,
    pub n_rows: usize,
    pub n_cols: usize,
}

/// `(genes, experiments)` of each cluster.
pub fn cluster_shapes(clusters: &[Cluster]) -> Vec<(usize, usize)> {
    clusters.iter().map(|c| (c.support(), c.pattern.len())).collect()
}

fn draw(n: usize, amount: usize, rng: &mut impl Rng) -> Vec<u32> {
    let mut v: Vec<u32> = sample(rng, n, amount).into_iter().map(|i| i as u32).collect();
    v.sort_unstable();
    v
}

/// One random cluster per reference shape: rows and columns each drawn
/// uniformly without replacement, independently per cluster.
pub fn random_clusters_with(
    shapes: &[(usize, usize)],
    n_rows: usize,
    n_cols: usize,
    rng: &mut impl Rng,
) -> Result<Vec<RandomCluster>, Infeasible> {
    if let Some(&(genes, exps)) = shapes.iter().find(|(g, c)| *g > n_rows || *c > n_cols) {
        return Err(Infeasible { genes, exps, n_rows, n_cols });
    }
    Ok(shapes
        .iter()
        .map(|&(g, c)| RandomCluster {
            rows: draw(n_rows, g, rng),
            cols: draw(n_cols, c, rng),
        })
        .collect())
}

/// Random clusters matching the size and length of every reference cluster.
pub fn random_clusters(
    reference: &[Cluster],
    n_rows: usize,
    n_cols: usize,
    seed: u64,
) -> Result<RandomClusterSet, Infeasible> {
    let clusters =
        random_clusters_with(&cluster_shapes(reference), n_rows, n_cols, &mut seeded_rng(seed))?;
    Ok(RandomClusterSet { clusters, seed })
}
