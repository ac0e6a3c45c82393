//! Scalar abstraction for the numeric kernel.

use num_traits::{Float, FromPrimitive, ToPrimitive};
use std::fmt::{Debug, Display};
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

/// Floating-point scalar the math kernel is generic over: `f32` or `f64`.
///
/// Iterative routines clamp their convergence targets to a small multiple
/// of `epsilon()`, so instantiating at `f32` converges to `f32` accuracy
/// rather than spinning on an unreachable tolerance.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Debug
    + Display
    + 'static
{
    /// Shorthand for converting an `f64` constant into `Self`.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant representable in scalar type")
    }

    /// Shorthand for converting a count into `Self`.
    #[inline]
    fn of_u64(n: u64) -> Self {
        // Counts beyond the mantissa are rejected at construction time by
        // the family validators, so this cannot lose integer exactness.
        Self::from_u64(n).expect("count representable in scalar type")
    }

    /// ln(2π), the log of the circle constant.
    #[inline]
    fn ln_tau() -> Self {
        Self::of(std::f64::consts::TAU.ln())
    }
}

impl Real for f32 {}
impl Real for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_convert() {
        assert_eq!(f64::of(0.5), 0.5);
        assert_eq!(f32::of_u64(7), 7.0f32);
        assert!((f64::ln_tau() - 1.8378770664093453).abs() < 1e-15);
    }
}
