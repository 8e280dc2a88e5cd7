//! Hard-bracketed bisection, the only scalar root finder used in the crate.
//!
//! Every equation solved here (savings first-order condition, capital-market
//! clearing, marginal-product inversion, steady-state location) is strictly
//! monotone on a known bracket, so bisection is exact, derivative-free, and
//! immune to the overflow/NaN hazards of Newton steps near the bracket edges.
//! Iteration runs until the midpoint collides with an endpoint (one ulp) or a
//! hard cap of 200 steps, whichever comes first; on every bracket arising in
//! practice the ulp collision wins long before the cap.

use crate::scalar::Real;

/// Iteration cap for all bisections.
pub(crate) const MAX_ITER: usize = 200;

/// Root of an increasing function on `[lo, hi]`.
///
/// Requires `f(lo) <= 0 <= f(hi)`; callers establish the bracket before
/// calling. Returns the midpoint of the final bracket.
pub(crate) fn bisect_increasing<F: Real>(mut lo: F, mut hi: F, f: impl Fn(F) -> F) -> F {
    debug_assert!(lo <= hi);
    let two = F::of(2.0);
    for _ in 0..MAX_ITER {
        let mid = (lo + hi) / two;
        if mid <= lo || mid >= hi {
            return mid.max(lo).min(hi);
        }
        if f(mid) < F::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) / two
}

/// Root of a decreasing function on `[lo, hi]` (`f(lo) >= 0 >= f(hi)`).
pub(crate) fn bisect_decreasing<F: Real>(lo: F, hi: F, f: impl Fn(F) -> F) -> F {
    bisect_increasing(lo, hi, |x| -f(x))
}

/// Root of a decreasing function on `[lo, hi]`, bisecting in log space.
///
/// For brackets spanning hundreds of decades (marginal-product inversion
/// starts from 1e-300) arithmetic midpoints would spend the whole iteration
/// budget on the top decade; geometric midpoints give uniform relative
/// precision everywhere. Requires `0 < lo <= hi` and `f(lo) >= 0 >= f(hi)`.
pub(crate) fn bisect_decreasing_log<F: Real>(mut lo: F, mut hi: F, f: impl Fn(F) -> F) -> F {
    debug_assert!(F::zero() < lo && lo <= hi);
    for _ in 0..MAX_ITER {
        // sqrt(lo)*sqrt(hi) rather than sqrt(lo*hi): the product can
        // underflow to zero when both ends are subnormal-range.
        let mid = lo.sqrt() * hi.sqrt();
        if mid <= lo || mid >= hi {
            return mid.max(lo).min(hi);
        }
        if f(mid) > F::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo.sqrt() * hi.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two_to_ulp() {
        let root = bisect_increasing(0.0f64, 2.0, |x| x * x - 2.0);
        assert!((root - 2.0f64.sqrt()).abs() <= f64::EPSILON * 2.0);
    }

    #[test]
    fn decreasing_wrapper_matches() {
        let root = bisect_decreasing(0.0f64, 2.0, |x| 2.0 - x * x);
        assert!((root - 2.0f64.sqrt()).abs() <= f64::EPSILON * 2.0);
    }

    #[test]
    fn log_bisection_handles_tiny_roots() {
        // Solve x^(-1/2) = 1e60  =>  x = 1e-120, from a bracket of 300 decades.
        let target = 1e60f64;
        let root = bisect_decreasing_log(1e-300f64, 1e9, |x| x.powf(-0.5) - target);
        assert!((root / 1e-120 - 1.0).abs() < 1e-12, "root = {root:e}");
    }

    #[test]
    fn log_bisection_survives_subnormal_endpoints() {
        let root = bisect_decreasing_log(1e-310f64, 1.0, |x| 1e-155 - x);
        assert!(root > 0.0 && (root / 1e-155 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn works_in_f32() {
        let root = bisect_increasing(0.0f32, 2.0, |x| x * x - 2.0);
        assert!((root - 2.0f32.sqrt()).abs() <= f32::EPSILON * 2.0);
    }
}
