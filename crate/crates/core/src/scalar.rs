//! Floating-point scalar abstraction.
//!
//! All walk and estimation numerics are generic over [`Scalar`], so the same
//! code runs at `f32` or `f64` precision. Concrete `f64` aliases live at the
//! crate root.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, NumAssign};

/// Real scalar type the walker amplitudes are built on.
///
/// Extends [`num_traits::Float`] with the constants and conversions the
/// simulator needs. Implemented for `f32` and `f64`.
pub trait Scalar:
    Float + FloatConst + NumAssign + Sum + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    fn from_f64(x: f64) -> Self;

    fn from_usize(n: usize) -> Self;

    fn from_i64(n: i64) -> Self;

    /// A tolerance stated for `f64`, rescaled to this type's precision.
    ///
    /// For `f64` this returns `tol` unchanged; for `f32` it is widened by
    /// the ratio of the machine epsilons so the same invariant checks stay
    /// meaningful at lower precision.
    fn spec_tol(tol: f64) -> Self {
        Self::from_f64(tol * (Self::epsilon().to_f64().unwrap_or(f64::EPSILON) / f64::EPSILON))
    }
}

impl Scalar for f32 {
    #[inline]
    fn from_f64(x: f64) -> Self {
        x as f32
    }

    #[inline]
    fn from_usize(n: usize) -> Self {
        n as f32
    }

    #[inline]
    fn from_i64(n: i64) -> Self {
        n as f32
    }
}

impl Scalar for f64 {
    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }

    #[inline]
    fn from_usize(n: usize) -> Self {
        n as f64
    }

    #[inline]
    fn from_i64(n: i64) -> Self {
        n as f64
    }
}

/// `-i` as a complex constant.
#[inline]
pub(crate) fn neg_i<T: Scalar>() -> Complex<T> {
    Complex::new(T::zero(), -T::one())
}
