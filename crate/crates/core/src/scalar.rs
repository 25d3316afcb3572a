//! Scalar abstraction shared by the geometric and numerical code.

use std::fmt::Debug;

use num_traits::{Float, FloatConst, FromPrimitive};

/// Real field used by the floating-point parts of the crate.
///
/// Implemented for `f32`, `f64` and the 40-digit software float
/// [`num_bigfloat::BigFloat`]; the bound enumerations run on `f64` and can be
/// re-checked on `BigFloat`.
pub trait Scalar: Float + FloatConst + FromPrimitive + Debug + Send + Sync + 'static {
    /// Lossy conversion from `f64`; exact for `f64` and wider types.
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("finite f64 converts")
    }

    /// Exact conversion of a small integer.
    fn of_i64(v: i64) -> Self {
        Self::from_i64(v).expect("i64 converts")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Relative rounding error of one operation.
    fn unit_roundoff() -> Self {
        Self::epsilon()
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

// `BigFloat::epsilon()` reports the f32 value; the type carries 40 digits.
impl Scalar for num_bigfloat::BigFloat {
    fn unit_roundoff() -> Self {
        Self::of(1e-39)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigfloat::BigFloat;

    #[test]
    fn bigfloat_carries_more_digits_than_f64() {
        let third = BigFloat::of(1.0) / BigFloat::of(3.0);
        let err = (third * BigFloat::of(3.0) - BigFloat::of(1.0)).abs();
        assert!(err < BigFloat::of(1e-35));
        let ln2 = BigFloat::of(2.0).ln();
        assert!((ln2.exp() - BigFloat::of(2.0)).abs() < BigFloat::of(1e-35));
        assert!((ln2.to_f64_lossy() - std::f64::consts::LN_2).abs() < 1e-16);
        assert_eq!(f32::of_i64(3), 3.0f32);
    }
}
