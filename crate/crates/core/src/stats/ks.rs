use alloc::vec::Vec;

use libm::{exp, sqrt};
use rand::seq::SliceRandom;

use super::{permutation_pvalue, seeded_rng, Tail};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsResult {
    /// `sup |F_x - F_y|`.
    pub d: f64,
    pub p: f64,
}

/// Two-sample Kolmogorov-Smirnov statistic.
pub fn ks_statistic(x: &[f64], y: &[f64]) -> f64 {
    let mut xs = x.to_vec();
    let mut ys = y.to_vec();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    let (nx, ny) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d = 0.0f64;
    while i < xs.len() && j < ys.len() {
        // Step past every copy of the smallest remaining value on both sides.
        let v = xs[i].min(ys[j]);
        while i < xs.len() && xs[i] == v {
            i += 1;
        }
        while j < ys.len() && ys[j] == v {
            j += 1;
        }
        d = d.max((i as f64 / nx - j as f64 / ny).abs());
    }
    d
}

/// `Q(lambda) = P(K > lambda)` for the Kolmogorov distribution.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.18 {
        // Theta-function form converges fast for small lambda.
        let pi2 = core::f64::consts::PI * core::f64::consts::PI;
        let mut cdf = 0.0;
        for j in 1..=20 {
            let k = (2 * j - 1) as f64;
            cdf += exp(-k * k * pi2 / (8.0 * lambda * lambda));
        }
        let cdf = cdf * sqrt(2.0 * core::f64::consts::PI) / lambda;
        (1.0 - cdf).clamp(0.0, 1.0)
    } else {
        let mut q = 0.0;
        for j in 1..=100 {
            let j = j as f64;
            let term = exp(-2.0 * j * j * lambda * lambda);
            q += if j as u32 % 2 == 1 { term } else { -term };
            if term < 1e-17 {
                break;
            }
        }
        (2.0 * q).clamp(0.0, 1.0)
    }
}

/// KS test with the asymptotic p-value at effective size `nx*ny/(nx+ny)`.
pub fn ks_two_sample(x: &[f64], y: &[f64]) -> KsResult {
    let d = ks_statistic(x, y);
    if x.is_empty() || y.is_empty() {
        return KsResult { d, p: 1.0 };
    }
    let (nx, ny) = (x.len() as f64, y.len() as f64);
    let en = nx * ny / (nx + ny);
    KsResult {
        d,
        p: kolmogorov_survival(sqrt(en) * d),
    }
}

/// Permutation p-value for the KS statistic, for samples too small for the
/// asymptotic distribution.
pub fn ks_permutation(x: &[f64], y: &[f64], permutations: usize, seed: u64) -> KsResult {
    let d = ks_statistic(x, y);
    let mut pooled: Vec<f64> = x.iter().chain(y).copied().collect();
    let mut rng = seeded_rng(seed);
    let null: Vec<f64> = (0..permutations)
        .map(|_| {
            pooled.shuffle(&mut rng);
            let (a, b) = pooled.split_at(x.len());
            ks_statistic(a, b)
        })
        .collect();
    KsResult {
        d,
        p: permutation_pvalue(d, &null, Tail::Greater),
    }
}
