#![allow(dead_code)]

use opsm_core::{Cluster, ExpressionMatrix, Orientation};

/// Positions of every column in a row's ascending order, computed straight
/// from the values (ties by column index), without the sequence database.
pub fn positions(matrix: &ExpressionMatrix, row: usize) -> Vec<usize> {
    let values = matrix.row(row);
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap().then(a.cmp(&b)));
    let mut pos = vec![0; values.len()];
    for (p, c) in order.into_iter().enumerate() {
        pos[c] = p;
    }
    pos
}

/// Whether `row` carries `pattern` in `orientation` with every gap at most `w`.
pub fn scan_supports(
    matrix: &ExpressionMatrix,
    row: usize,
    pattern: &[u32],
    w: usize,
    orientation: Orientation,
) -> bool {
    let pos = positions(matrix, row);
    pattern.windows(2).all(|pair| {
        let (a, b) = (pos[pair[0] as usize] as i64, pos[pair[1] as usize] as i64);
        let step = match orientation {
            Orientation::Forward => b - a,
            Orientation::Backward => a - b,
        };
        step >= 1 && step <= w as i64
    })
}

/// Cluster identity up to the choice of reading direction: the
/// lexicographically smaller of pattern and reverse, with supporter
/// orientations expressed relative to it.
pub fn class_key(c: &Cluster) -> (Vec<u32>, Vec<(u32, bool)>) {
    let p = c.pattern.cols().to_vec();
    let r: Vec<u32> = p.iter().rev().copied().collect();
    let flip = r < p;
    let rows = c
        .supporters
        .iter()
        .map(|s| (s.row, (s.orientation == Orientation::Forward) != flip))
        .collect();
    (if flip { r } else { p }, rows)
}

pub fn matrix(rows: &[Vec<f64>]) -> ExpressionMatrix {
    ExpressionMatrix::from_rows(rows).unwrap()
}
