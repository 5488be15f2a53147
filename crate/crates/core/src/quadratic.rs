//! Cancellation-free real roots of `a2 x^2 + a1 x + a0`.

use crate::error::{Error, Result};

/// Discriminant `a1^2 - 4 a2 a0` with the rounding errors of both products
/// recovered by fused multiply-add.
fn discriminant(a2: f64, a1: f64, a0: f64) -> f64 {
    let p = a1 * a1;
    let dp = a1.mul_add(a1, -p);
    let q = 4.0 * a2 * a0;
    let dq = (4.0 * a2).mul_add(a0, -q);
    (p - q) + (dp - dq)
}

/// Both real roots in ascending order.
///
/// The larger-magnitude root comes from `-(a1 + sign(a1) sqrt(D)) / (2 a2)`
/// and its companion from the product of the roots, `a0 / (a2 r)`, so
/// neither suffers subtractive cancellation.
pub fn solve_quadratic_stable(a2: f64, a1: f64, a0: f64) -> Result<(f64, f64)> {
    if a2 == 0.0 {
        return Err(Error::DegenerateLinear);
    }
    let disc = discriminant(a2, a1, a0);
    if disc < 0.0 {
        return Err(Error::NoRealRoots(disc));
    }
    let sign = if a1 < 0.0 { -1.0 } else { 1.0 };
    let t = -0.5 * (a1 + sign * disc.sqrt());
    let (r1, r2) = if t == 0.0 {
        // a1 = 0 and a0 = 0
        (0.0, 0.0)
    } else {
        (t / a2, a0 / t)
    };
    Ok(if r1 <= r2 { (r1, r2) } else { (r2, r1) })
}
