use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point type the analyses are generic over.
///
/// Implemented for `f32` and `f64`. The precision figures quoted throughout the
/// crate (for instance the `1e-10` CDF accuracy) are `f64` figures; `f32`
/// results carry single precision.
pub trait Scalar: Float + FloatConst + FromPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static {
    /// Converts an `f64` literal into this type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    /// Smallest probability that is allowed to reach the normal quantile.
    ///
    /// `1e-12` for `f64`; for narrower types the machine epsilon, because
    /// `1 - 1e-12` would round to one.
    #[inline]
    fn rate_floor() -> Self {
        Self::lit(1e-12).max(Self::epsilon())
    }

    #[inline]
    fn half() -> Self {
        Self::lit(0.5)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
