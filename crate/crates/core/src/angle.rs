//! Branch handling for phases.
//!
//! Every phase returned by this crate lies on the principal branch
//! `(-π, π]` unless the function name says otherwise.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

/// Reduce an angle to `(-π, π]`.
pub fn principal(angle: f64) -> f64 {
    let mut a = angle.rem_euclid(TAU);
    if a > PI {
        a -= TAU;
    }
    // rem_euclid can return TAU itself for tiny negative inputs
    if a <= -PI {
        a += TAU;
    }
    a
}

/// Argument of a complex number on `(-π, π]`.
///
/// `atan2` returns `-π` for `-1 - 0i`; that value is folded onto `+π`.
pub fn arg(z: Complex64) -> f64 {
    let a = z.im.atan2(z.re);
    if a <= -PI {
        PI
    } else {
        a
    }
}

/// Shortest signed distance between two angles on the circle.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    principal(a - b).abs()
}

/// Unwrap a sequence of principal-branch angles by continuity, starting from
/// the first value as given.
pub fn unwrap(angles: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(angles.len());
    let mut offset = 0.0;
    let mut prev: Option<f64> = None;
    for &a in angles {
        if let Some(p) = prev {
            let step = a + offset - p;
            offset -= TAU * (step / TAU).round();
        }
        let v = a + offset;
        out.push(v);
        prev = Some(v);
    }
    out
}
