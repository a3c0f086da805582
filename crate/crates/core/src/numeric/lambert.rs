//! The lower real branch `W_{-1}` of the Lambert W function.

use std::f64::consts::E;

use crate::error::{Error, Result};

const INV_E: f64 = 1.0 / E;

/// `W_{-1}(x)`: the solution `w <= -1` of `w e^w = x` for `x` in `[-1/e, 0)`.
///
/// Halley iteration from the branch-point series (near `-1/e`) or the
/// asymptotic `ln(-x) - ln(-ln(-x))` (near zero), with bisection as a
/// fallback whenever an iterate leaves `(-inf, -1]`.
pub fn lambert_w_minus1(x: f64) -> Result<f64> {
    if !x.is_finite() || !(-INV_E..0.0).contains(&x) {
        return Err(Error::Domain(format!("W_-1 is defined on [-1/e, 0), got {x}")));
    }
    if x == -INV_E {
        return Ok(-1.0);
    }
    let guess = if x < -0.25 {
        // p = -sqrt(2(1 + e x)); W = -1 + p - p^2/3 + 11 p^3 / 72 - ...
        let p = -(2.0 * (1.0 + E * x)).max(0.0).sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
    } else {
        let l1 = (-x).ln();
        let l2 = (-l1).ln();
        l1 - l2 + l2 / l1
    };
    match halley(x, guess) {
        Some(w) => Ok(w),
        None => Ok(bisect(x)),
    }
}

fn halley(x: f64, mut w: f64) -> Option<f64> {
    for _ in 0..64 {
        if !w.is_finite() || w > -1.0 {
            return None;
        }
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        if wp1 == 0.0 {
            return Some(w);
        }
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        if denom == 0.0 || !denom.is_finite() {
            return None;
        }
        let next = w - f / denom;
        if (next - w).abs() <= 4.0 * f64::EPSILON * w.abs() {
            return (next <= -1.0).then_some(next);
        }
        w = next;
    }
    (w <= -1.0 && w.is_finite()).then_some(w)
}

/// Bisection on `g(w) = w e^w - x`, which is decreasing on `(-inf, -1]`.
fn bisect(x: f64) -> f64 {
    let g = |w: f64| w * w.exp() - x;
    let mut hi = -1.0;
    let mut lo = -2.0;
    while g(lo) <= 0.0 {
        lo *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: plain bisection on w e^w = x over [-50, -1].
    fn oracle(x: f64) -> f64 {
        let (mut lo, mut hi) = (-50.0f64, -1.0f64);
        for _ in 0..300 {
            let mid = 0.5 * (lo + hi);
            if mid * mid.exp() > x {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    fn residual(w: f64, x: f64) -> f64 {
        (w * w.exp() - x).abs() / x.abs()
    }

    #[test]
    fn branch_point() {
        assert_eq!(lambert_w_minus1(-INV_E).unwrap(), -1.0);
    }

    #[test]
    fn known_values() {
        let w = lambert_w_minus1(-0.1).unwrap();
        assert!((w - (-3.577152063957297)).abs() < 1e-12);
        assert!((w - oracle(-0.1)).abs() < 1e-10);
        let w = lambert_w_minus1(-0.01).unwrap();
        assert!(residual(w, -0.01) <= 1e-12);
        assert!((w - oracle(-0.01)).abs() < 1e-10);
    }

    #[test]
    fn domain_errors() {
        assert!(lambert_w_minus1(-0.5).is_err());
        assert!(lambert_w_minus1(0.0).is_err());
        assert!(lambert_w_minus1(0.1).is_err());
        assert!(lambert_w_minus1(f64::NAN).is_err());
    }

    #[test]
    fn bisection_fallback_agrees() {
        for &x in &[-0.3, -0.1, -1e-5, -1e-200] {
            let w = bisect(x);
            assert!(residual(w, x) <= 1e-12, "{x}");
        }
    }

    #[test]
    fn round_trip_on_a_grid() {
        // 10^3 points spread geometrically over (-1/e, -1e-6].
        let n = 1000;
        let (a, b) = ((INV_E * (1.0 - 1e-9)).ln(), (1e-6f64).ln());
        for i in 0..n {
            let t = i as f64 / (n - 1) as f64;
            let x = -(a + t * (b - a)).exp();
            let w = lambert_w_minus1(x).unwrap();
            assert!(w <= -1.0);
            assert!(residual(w, x) <= 1e-12, "x = {x}, w = {w}, r = {}", residual(w, x));
        }
    }
}
