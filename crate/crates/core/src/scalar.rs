//! Scalar abstractions.
//!
//! [`Scalar`] covers anything with field arithmetic: `f32`, `f64` and the
//! rational types. Closed forms that are rational functions of the model
//! parameters are written against it, so the same code yields exact
//! fractions or floats. [`Real`] adds transcendental functions and is used
//! by special functions and quadrature.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Float, FromPrimitive, Num, ToPrimitive};
use std::fmt::Debug;

pub trait Scalar: Clone + Debug + PartialOrd + Num {
    fn from_i64(v: i64) -> Self;

    fn to_f64(&self) -> f64;

    fn from_u64(v: u64) -> Self {
        Self::from_i64(i64::try_from(v).expect("integer fits in i64"))
    }
}

impl Scalar for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for f32 {
    fn from_i64(v: i64) -> Self {
        v as f32
    }
    fn to_f64(&self) -> f64 {
        *self as f64
    }
}

impl Scalar for Ratio<i64> {
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(v)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl Scalar for BigRational {
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(BigInt::from(v))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Floating point scalar (`f32` or `f64`).
pub trait Real: Scalar + Float + FromPrimitive + Send + Sync + 'static {
    /// Lossy conversion from an `f64` literal.
    fn lit(v: f64) -> Self {
        <Self as FromPrimitive>::from_f64(v).expect("finite literal")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Builds a rational from a numerator and denominator.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
