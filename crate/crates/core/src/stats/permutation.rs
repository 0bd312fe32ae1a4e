use alloc::vec::Vec;

use super::{replicate_rng, StatsRng};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tail {
    Greater,
    Less,
}

/// Empirical p-value with add-one correction, so it is never 0.
///
/// `(1 + #{null at or beyond observed}) / (1 + R)`.
pub fn permutation_pvalue(observed: f64, null: &[f64], tail: Tail) -> f64 {
    let hits = null
        .iter()
        .filter(|&&v| match tail {
            Tail::Greater => v >= observed,
            Tail::Less => v <= observed,
        })
        .count();
    (1 + hits) as f64 / (1 + null.len()) as f64
}

/// Evaluates `f` once per replicate with that replicate's own generator.
///
/// Results are in replicate order whatever the thread count.
pub fn replicates<T, F>(count: usize, seed: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut StatsRng) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..count)
            .into_par_iter()
            .map(|i| f(&mut replicate_rng(seed, i as u64)))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..count)
            .map(|i| f(&mut replicate_rng(seed, i as u64)))
            .collect()
    }
}
