//! Statistics kernel shared by the evaluation procedures.
//!
//! All randomness flows through [`seeded_rng`] / [`replicate_rng`]: ChaCha8
//! keyed by the user seed, with one stream per permutation replicate, so every
//! analysis replays exactly and is independent of scheduling.

mod bh;
mod correlation;
mod fisher;
mod ks;
mod permutation;
mod random_clusters;
mod ranksum;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use bh::bh_adjust;
pub use correlation::{midranks, pearson, spearman};
pub use fisher::{fisher_exact, hypergeometric_upper_tail};
pub use ks::{kolmogorov_survival, ks_permutation, ks_statistic, ks_two_sample, KsResult};
pub use permutation::{permutation_pvalue, replicates, Tail};
pub use random_clusters::{cluster_shapes, random_clusters, random_clusters_with, Infeasible, RandomCluster, RandomClusterSet};
pub use ranksum::{rank_sum, rank_sum_with, Alternative, RankSumMethod, RankSumResult};

/// Generator identity recorded in every report that consumes randomness.
pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha 0.3), seed_from_u64(seed), stream = replicate + 1";

pub type StatsRng = ChaCha8Rng;

/// Base generator for a seed (stream 0).
pub fn seeded_rng(seed: u64) -> StatsRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent generator for permutation replicate `replicate`.
pub fn replicate_rng(seed: u64, replicate: u64) -> StatsRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replicate + 1);
    rng
}

/// Standard normal upper tail, `P(Z > z)`.
pub(crate) fn normal_sf(z: f64) -> f64 {
    0.5 * libm::erfc(z / core::f64::consts::SQRT_2)
}
