//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point scalar: `f32` or `f64`.
///
/// On top of `num_traits::Float` this carries the handful of special
/// functions the standard library does not provide.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + 'static
{
    /// Gamma function.
    fn tgamma(self) -> Self;
    /// Natural log of |Γ(x)|.
    fn ln_gamma(self) -> Self;
    /// Complementary error function.
    fn erfc(self) -> Self;
}

impl Scalar for f64 {
    #[inline]
    fn tgamma(self) -> Self {
        libm::tgamma(self)
    }
    #[inline]
    fn ln_gamma(self) -> Self {
        libm::lgamma(self)
    }
    #[inline]
    fn erfc(self) -> Self {
        libm::erfc(self)
    }
}

impl Scalar for f32 {
    #[inline]
    fn tgamma(self) -> Self {
        libm::tgammaf(self)
    }
    #[inline]
    fn ln_gamma(self) -> Self {
        libm::lgammaf(self)
    }
    #[inline]
    fn erfc(self) -> Self {
        libm::erfcf(self)
    }
}

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in scalar type")
}

/// Converts a count into `T`.
#[inline]
pub fn from_usize<T: Scalar>(n: usize) -> T {
    T::from_usize(n).expect("count representable in scalar type")
}

/// Lossy view as `f64`, used for diagnostics and serialization.
#[inline]
pub fn to_f64<T: Scalar>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `sin(πx)` with exact zeros at the integers.
pub fn sin_pi<T: Scalar>(x: T) -> T {
    let two = lit::<T>(2.0);
    // reduction modulo 2 is exact in binary floating point
    let mut r = x % two;
    if r < T::zero() {
        r = r + two;
    }
    if r == T::zero() || r == T::one() {
        return T::zero();
    }
    let half = lit::<T>(0.5);
    let pi = T::PI();
    if r < half {
        (pi * r).sin()
    } else if r < lit(1.5) {
        (pi * (T::one() - r)).sin()
    } else {
        -(pi * (two - r)).sin()
    }
}
