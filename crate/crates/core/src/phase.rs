//! Branch handling for angles.

use std::f64::consts::{PI, TAU};

/// Principal value in `(−π, π]`.
pub fn wrap(angle: f64) -> f64 {
    let r = angle.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// The representative of `angle` (mod 2π) closest to `reference`.
pub fn unwrap_near(angle: f64, reference: f64) -> f64 {
    reference + wrap(angle - reference)
}

/// Unwraps a sequence of principal-value angles into a continuous branch.
///
/// Each output is `input + 2π·m` for an integer winding `m`, so rounding does
/// not accumulate along the sequence.
pub fn unwrap(angles: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(angles.len());
    let mut winding = 0.0_f64;
    let mut prev: Option<f64> = None;
    for &a in angles {
        if let Some(p) = prev {
            let candidate = a + TAU * winding;
            let jump = candidate - p;
            winding += (-jump / TAU).round();
        }
        let value = a + TAU * winding;
        out.push(value);
        prev = Some(value);
    }
    out
}
