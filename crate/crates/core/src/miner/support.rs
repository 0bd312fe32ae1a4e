use crate::sequencer::SequenceDatabase;

use super::Orientation;

/// Checks whether `row` supports `pattern` in `orientation` under window `w`.
///
/// Every column sits at one fixed position per row, so this is a direct test:
/// the pattern's positions must be strictly increasing (forward) or
/// decreasing (backward) with each consecutive gap at most `w`. The first
/// element may sit anywhere. Returns the position of the last element.
pub fn support_check(
    pattern: &[u32],
    row: usize,
    db: &SequenceDatabase,
    w: usize,
    orientation: Orientation,
) -> Option<u32> {
    let pos = db.pos(row);
    let (&first, rest) = pattern.split_first()?;
    let mut prev = pos[first as usize] as usize;
    for &c in rest {
        let p = pos[c as usize] as usize;
        let gap = match orientation {
            Orientation::Forward if p > prev => p - prev,
            Orientation::Backward if p < prev => prev - p,
            _ => return None,
        };
        if gap > w {
            return None;
        }
        prev = p;
    }
    Some(prev as u32)
}
