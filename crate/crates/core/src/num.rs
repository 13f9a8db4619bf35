//! Scalar abstraction and complex linear-algebra aliases.
//!
//! All numeric code in this crate is generic over a real scalar type so the
//! same routines run at `f32` or `f64` precision. Concrete `f64` aliases are
//! exported from the crate root; the default tolerances in the rest of the
//! crate assume `f64`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

/// Real scalar the toolkit is generic over. Implemented by `f32` and `f64`.
pub trait Real:
    nalgebra::RealField + num_traits::FromPrimitive + num_traits::ToPrimitive + Copy
{
}

impl<T: nalgebra::RealField + num_traits::FromPrimitive + num_traits::ToPrimitive + Copy> Real
    for T
{
}

/// Complex scalar over a [`Real`].
pub type Cplx<T> = Complex<T>;
/// Dense complex matrix.
pub type CMat<T> = DMatrix<Complex<T>>;
/// Dense complex vector.
pub type CVec<T> = DVector<Complex<T>>;

/// Converts an `f64` constant into the working scalar type.
#[inline]
pub fn r<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("constant not representable in scalar type")
}

/// Converts a `usize` into the working scalar type.
#[inline]
pub fn ru<T: Real>(n: usize) -> T {
    T::from_usize(n).expect("count not representable in scalar type")
}

/// Lossy conversion to `f64`, for diagnostics.
#[inline]
pub fn lossy<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Modulus of a complex number over a generic [`Real`].
#[inline]
pub fn cmod<T: Real>(z: Complex<T>) -> T {
    (z.re * z.re + z.im * z.im).sqrt()
}

/// Real value promoted to a complex one.
#[inline]
pub fn cr<T: Real>(x: T) -> Cplx<T> {
    Complex::new(x, T::zero())
}

/// `x log2 x` with the `0 log 0 = 0` convention.
#[inline]
pub fn xlog2x<T: Real>(x: T) -> T {
    if x > T::zero() {
        x * x.log2()
    } else {
        T::zero()
    }
}

/// `log2 d` for a dimension count.
#[inline]
pub fn log2_usize<T: Real>(d: usize) -> T {
    ru::<T>(d).log2()
}

/// Concrete `f64` complex scalar.
pub type C64 = Complex<f64>;
/// Concrete `f64` complex matrix.
pub type CMat64 = CMat<f64>;
/// Concrete `f64` complex vector.
pub type CVec64 = CVec<f64>;

/// `f64` complex literal.
#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xlog2x_handles_zero_and_negatives() {
        assert_eq!(xlog2x(0.0f64), 0.0);
        assert_eq!(xlog2x(-1e-12f64), 0.0);
        assert!((xlog2x(0.5f64) + 0.5).abs() < 1e-15);
    }

    #[test]
    fn scalar_conversions_work_at_f32() {
        let x: f32 = r(0.25);
        assert_eq!(x, 0.25f32);
        assert_eq!(ru::<f32>(4), 4.0f32);
    }
}
