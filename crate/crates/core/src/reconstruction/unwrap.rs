//! One-dimensional phase unwrapping restricted to a validity mask.

use std::f64::consts::PI;

/// Maps an angle into `(−π, π]`.
pub fn wrap(angle: f64) -> f64 {
    let r = angle - 2.0 * PI * (angle / (2.0 * PI)).round();
    if r <= -PI {
        r + 2.0 * PI
    } else {
        r
    }
}

/// Unwraps `phase` across the bins where `mask` is set, adding multiples of
/// 2π whenever consecutive valid samples jump by more than π. Masked bins
/// between valid ones are linearly bridged; masked bins beyond the first
/// and last valid sample hold the nearest valid value.
///
/// Returns `None` when no bin is valid.
pub fn unwrap_masked(phase: &[f64], mask: &[bool]) -> Option<Vec<f64>> {
    debug_assert_eq!(phase.len(), mask.len());
    let valid: Vec<usize> = (0..phase.len()).filter(|&i| mask[i]).collect();
    let first = *valid.first()?;
    let mut out = vec![0.0; phase.len()];
    out[first] = phase[first];
    for pair in valid.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        out[b] = out[a] + wrap(phase[b] - phase[a]);
    }
    bridge(&mut out, &valid);
    Some(out)
}

/// Fills the gaps between `valid` indices by linear interpolation and holds
/// the end values outside them.
pub(crate) fn bridge(values: &mut [f64], valid: &[usize]) {
    let (Some(&first), Some(&last)) = (valid.first(), valid.last()) else {
        return;
    };
    for pair in valid.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        for i in a + 1..b {
            let f = (i - a) as f64 / (b - a) as f64;
            values[i] = values[a] + f * (values[b] - values[a]);
        }
    }
    let (head, tail) = (values[first], values[last]);
    values[..first].iter_mut().for_each(|v| *v = head);
    values[last + 1..].iter_mut().for_each(|v| *v = tail);
}
