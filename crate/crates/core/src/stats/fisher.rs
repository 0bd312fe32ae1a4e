use libm::{exp, lgamma};

fn ln_choose(n: u64, k: u64) -> f64 {
    lgamma(n as f64 + 1.0) - lgamma(k as f64 + 1.0) - lgamma((n - k) as f64 + 1.0)
}

/// `P(X >= x)` for `X ~ Hypergeometric(population, successes, draws)`.
pub fn hypergeometric_upper_tail(x: u64, population: u64, successes: u64, draws: u64) -> f64 {
    let lo = (draws + successes).saturating_sub(population);
    let hi = draws.min(successes);
    if x <= lo {
        return 1.0;
    }
    if x > hi {
        return 0.0;
    }
    // First term in log space, the rest by the pmf ratio recurrence.
    let mut term = exp(
        ln_choose(successes, x) + ln_choose(population - successes, draws - x)
            - ln_choose(population, draws),
    );
    let mut sum = 0.0;
    for k in x..=hi {
        sum += term;
        let num = ((successes - k) * (draws - k)) as f64;
        let den = ((k + 1) * (population + k + 1 - successes - draws)) as f64;
        term *= num / den;
    }
    sum.clamp(0.0, 1.0)
}

/// One-sided (over-representation) Fisher exact test on a 2x2 table.
///
/// `a` in-cluster with term, `b` in-cluster without, `c` outside with term,
/// `d` outside without. Returns `P(overlap >= a)` under the hypergeometric
/// null with all margins fixed.
pub fn fisher_exact(a: u64, b: u64, c: u64, d: u64) -> f64 {
    let n = a + b + c + d;
    if n == 0 {
        return 1.0;
    }
    hypergeometric_upper_tail(a, n, a + c, a + b)
}
