//! Scalar abstraction: every quantitative routine in this crate is generic
//! over a floating-point-like scalar so that the same code runs in `f32`,
//! `f64`, or any other type satisfying the bounds.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar used throughout the crate.
///
/// Blanket-implemented for anything with [`Float`] semantics that can absorb
/// `f64` literals and travel across threads; `f32` and `f64` qualify.
pub trait Real: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {
    /// Lift an `f64` constant into this scalar type.
    ///
    /// Panics if the value is not representable at all (never the case for
    /// the finite constants used internally; overflow saturates to infinity
    /// for narrow types, which is the conventional rounding behaviour).
    fn of(value: f64) -> Self {
        match Self::from_f64(value) {
            Some(x) => x,
            None => {
                if value.is_nan() {
                    Self::nan()
                } else if value > 0.0 {
                    Self::infinity()
                } else {
                    Self::neg_infinity()
                }
            }
        }
    }

    /// Nearest `f64` image of this scalar (used for serialization).
    fn approx_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Real for T where T: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lifts_constants_into_both_widths() {
        assert_eq!(f64::of(1.5), 1.5);
        assert_eq!(f32::of(1.5), 1.5f32);
        assert_eq!(f64::of(1e-14), 1e-14);
        // f32 cannot hold 1e300: saturates rather than panicking.
        assert!(f32::of(1e300).is_infinite());
    }

    #[test]
    fn roundtrips_to_f64() {
        assert_eq!(0.1f64.approx_f64(), 0.1);
        assert_eq!(0.5f32.approx_f64(), 0.5);
    }
}
