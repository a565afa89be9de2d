//! Real scalar abstraction shared by the linear algebra, metrics and solvers.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar the crate can compute with: `f32` or `f64`.
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
    /// Lossy conversion from an `f64` literal.
    fn lit(value: f64) -> Self {
        Self::from_f64(value).expect("f64 literal representable")
    }

    fn from_usize_lossy(value: usize) -> Self {
        Self::from_usize(value).expect("count representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `|z|^2` without the square root.
#[inline]
pub fn abs2<T: Real>(z: Complex<T>) -> T {
    z.re * z.re + z.im * z.im
}

/// Unit phasor `e^{j angle}`.
#[inline]
pub fn cis<T: Real>(angle: T) -> Complex<T> {
    Complex::new(angle.cos(), angle.sin())
}

/// Wraps an angle to the principal interval (-pi, pi].
pub fn wrap_phase<T: Real>(angle: T) -> T {
    let pi = T::PI();
    let two_pi = pi + pi;
    let mut a = angle % two_pi;
    if a <= -pi {
        a += two_pi;
    } else if a > pi {
        a -= two_pi;
    }
    a
}
