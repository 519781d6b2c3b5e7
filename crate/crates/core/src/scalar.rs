//! Scalar abstraction shared by the numerical kernels.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating-point scalar the kernels are generic over (`f32`, `f64`).
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Machine epsilon scaled tolerance used when deciding a pivot is zero.
    fn tiny() -> Self {
        Self::min_positive_value().sqrt()
    }

    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Lossy conversion from a count.
    fn count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex number over a [`Real`] scalar.
pub type Cplx<T> = Complex<T>;

/// Shorthand for building a complex value from real and imaginary parts.
#[inline]
pub fn cplx<T: Real>(re: T, im: T) -> Cplx<T> {
    Complex::new(re, im)
}

/// Square root branch with `sqrt(w) ~ w` at infinity for `w = z^2 - 4`, i.e. the
/// root `s` of `s^2 = z^2 - 4` whose sign makes `Im((-z + s)/2) > 0` on the upper
/// half-plane.
pub fn sqrt_z2_minus_4<T: Real>(z: Cplx<T>) -> Cplx<T> {
    let four = T::lit(4.0);
    let s = (z * z - cplx(four, T::zero())).sqrt();
    // (-z + s)/2 must lie in the upper half-plane; otherwise take the other root.
    if (s - z).im > T::zero() {
        s
    } else {
        -s
    }
}
