//! Scalar abstraction shared by every numerical module.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating point type the numerical kernels are written against: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Default
    + Debug
    + Display
    + Sum
    + Send
    + Sync
    + rustfft::FftNum
    + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal representable in the scalar type")
}

/// Converts a count into `T`.
#[inline]
pub fn count<T: Real>(n: usize) -> T {
    T::from_usize(n).expect("count representable in the scalar type")
}

#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[inline]
pub fn cpx<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(lit(re), lit(im))
}

/// Deterministic blocked summation; the block order is fixed so results do not
/// depend on thread scheduling.
pub fn blocked_sum<T: Real>(values: &[Complex<T>]) -> Complex<T> {
    const BLOCK: usize = 256;
    if values.len() <= BLOCK {
        return values.iter().fold(Complex::new(T::zero(), T::zero()), |a, &b| a + b);
    }
    let mid = values.len() / 2;
    blocked_sum(&values[..mid]) + blocked_sum(&values[mid..])
}

/// Same as [`blocked_sum`] for real values.
pub fn blocked_sum_real<T: Real>(values: &[T]) -> T {
    const BLOCK: usize = 256;
    if values.len() <= BLOCK {
        return values.iter().fold(T::zero(), |a, &b| a + b);
    }
    let mid = values.len() / 2;
    blocked_sum_real(&values[..mid]) + blocked_sum_real(&values[mid..])
}

/// Reciprocal `1/z` with Smith's scaling, safe for very large or small `|z|`.
pub fn recip<T: Real>(z: Complex<T>) -> Complex<T> {
    if z.re.abs() >= z.im.abs() {
        let r = z.im / z.re;
        let d = z.re + z.im * r;
        Complex::new(T::one() / d, -r / d)
    } else {
        let r = z.re / z.im;
        let d = z.re * r + z.im;
        Complex::new(r / d, -T::one() / d)
    }
}
