use alloc::vec::Vec;

use libm::sqrt;

use super::{midranks, normal_sf};

/// Pooled size at or below which the exact null distribution is enumerated.
pub const EXACT_LIMIT: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Alternative {
    /// `x` tends to be smaller than `y`.
    Less,
    /// `x` tends to be larger than `y`.
    Greater,
    TwoSided,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankSumMethod {
    /// Exact when the pooled size is at most 12, normal otherwise.
    Auto,
    Exact,
    Normal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankSumResult {
    /// Mann-Whitney U for `x`: pairs `(xi, yj)` with `xi > yj`, ties half.
    pub u: f64,
    pub p: f64,
    pub exact: bool,
}

/// Wilcoxon rank-sum / Mann-Whitney U test.
pub fn rank_sum(x: &[f64], y: &[f64], alternative: Alternative) -> RankSumResult {
    rank_sum_with(x, y, alternative, RankSumMethod::Auto)
}

pub fn rank_sum_with(
    x: &[f64],
    y: &[f64],
    alternative: Alternative,
    method: RankSumMethod,
) -> RankSumResult {
    let (nx, ny) = (x.len(), y.len());
    let n = nx + ny;
    if nx == 0 || ny == 0 {
        return RankSumResult { u: 0.0, p: 1.0, exact: true };
    }
    let pooled: Vec<f64> = x.iter().chain(y).copied().collect();
    // Doubled midranks are integers, which keeps the exact null comparisons exact.
    let ranks2: Vec<u64> = midranks(&pooled).iter().map(|r| (r * 2.0) as u64).collect();
    let offset2 = (nx * (nx + 1)) as u64;
    let u2 = ranks2[..nx].iter().sum::<u64>() - offset2;
    let u = u2 as f64 / 2.0;

    let exact = match method {
        RankSumMethod::Auto => n <= EXACT_LIMIT,
        RankSumMethod::Exact => true,
        RankSumMethod::Normal => false,
    };
    let p = if exact {
        exact_p(&ranks2, nx, offset2, u2, alternative)
    } else {
        normal_p(&pooled, nx, ny, u, alternative)
    };
    RankSumResult { u, p, exact }
}

fn exact_p(ranks2: &[u64], nx: usize, offset2: u64, u2: u64, alternative: Alternative) -> f64 {
    let n = ranks2.len();
    let (mut total, mut le, mut ge) = (0u64, 0u64, 0u64);
    // Walk all nx-subsets of positions in lexicographic order.
    let mut idx: Vec<usize> = (0..nx).collect();
    loop {
        let s = idx.iter().map(|&i| ranks2[i]).sum::<u64>() - offset2;
        total += 1;
        le += (s <= u2) as u64;
        ge += (s >= u2) as u64;
        let mut i = nx;
        loop {
            if i == 0 {
                let (le, ge, total) = (le as f64, ge as f64, total as f64);
                return match alternative {
                    Alternative::Less => le / total,
                    Alternative::Greater => ge / total,
                    Alternative::TwoSided => (2.0 * le.min(ge) / total).min(1.0),
                };
            }
            i -= 1;
            if idx[i] < n - nx + i {
                idx[i] += 1;
                for j in i + 1..nx {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn normal_p(pooled: &[f64], nx: usize, ny: usize, u: f64, alternative: Alternative) -> f64 {
    let n = (nx + ny) as f64;
    let mut sorted = pooled.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let j = sorted[i..].iter().take_while(|&&v| v == sorted[i]).count();
        let t = j as f64;
        tie_term += t * t * t - t;
        i += j;
    }
    let (nx, ny) = (nx as f64, ny as f64);
    let mean = nx * ny / 2.0;
    let var = nx * ny / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if var <= 0.0 {
        return 1.0;
    }
    let sd = sqrt(var);
    match alternative {
        Alternative::Less => 1.0 - normal_sf((u - mean + 0.5) / sd),
        Alternative::Greater => normal_sf((u - mean - 0.5) / sd),
        Alternative::TwoSided => {
            let z = ((u - mean).abs() - 0.5).max(0.0) / sd;
            (2.0 * normal_sf(z)).min(1.0)
        }
    }
}
