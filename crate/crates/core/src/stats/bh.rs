use alloc::vec::Vec;

/// Benjamini-Hochberg step-up adjustment; output follows input order.
pub fn bh_adjust(p: &[f64]) -> Vec<f64> {
    let m = p.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| p[i].total_cmp(&p[j]).then(i.cmp(&j)));
    let mut adjusted = alloc::vec![0.0; m];
    let mut running = 1.0f64;
    for (rank, &i) in order.iter().enumerate().rev() {
        running = running.min(p[i] * m as f64 / (rank + 1) as f64);
        // Exact arithmetic never goes below p; rounding in p*m/rank can.
        adjusted[i] = running.max(p[i]).min(1.0);
    }
    adjusted
}
