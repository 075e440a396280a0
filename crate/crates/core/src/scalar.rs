//! Scalar abstraction shared by every numerical kernel.
//!
//! All math in this crate is written against [`Real`] so that the kernels can
//! be instantiated at `f32` or `f64`. The tolerances quoted throughout assume
//! `f64`; an `f32` instantiation works but cannot meet them.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use serde::{de::DeserializeOwned, Serialize};

/// Real scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Converts an `f64` literal (tolerances, rational table entries).
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex literal.
#[inline]
pub fn cx<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::lit(im))
}

/// Real scalar lifted to the complex plane.
#[inline]
pub fn re<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

#[inline]
pub fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

#[inline]
pub fn cone<T: Real>() -> Complex<T> {
    Complex::new(T::one(), T::zero())
}

/// `2πi`.
#[inline]
pub fn two_pi_i<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::TAU())
}

/// Mixed relative error `|a - b| / max(|b|, 1)`.
///
/// Used for every "relative error" tolerance in the test suites; it degrades
/// to absolute error for values of modulus below one.
#[inline]
pub fn rel_err<T: Real>(a: Complex<T>, b: Complex<T>) -> T {
    (a - b).norm() / b.norm().max(T::one())
}

/// `n choose k` as a scalar.
pub fn binomial<T: Real>(n: usize, k: usize) -> T {
    if k > n {
        return T::zero();
    }
    let k = k.min(n - k);
    let mut acc = T::one();
    for i in 0..k {
        acc = acc * T::from_usize_lossy(n - i) / T::from_usize_lossy(i + 1);
    }
    acc
}

/// `e^z - 1` without cancellation for small `z`.
pub fn expm1<T: Real>(z: Complex<T>) -> Complex<T> {
    let half = (z.im * T::lit(0.5)).sin();
    let re = z.re.exp_m1() * z.im.cos() - T::lit(2.0) * half * half;
    Complex::new(re, z.re.exp() * z.im.sin())
}

pub fn is_finite<T: Real>(z: Complex<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

pub(crate) fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn fmt_cx<T: Real>(z: Complex<T>) -> String {
    format!("{}{:+}i", to_f64(z.re), to_f64(z.im))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_small_table() {
        assert_eq!(binomial::<f64>(5, 2), 10.0);
        assert_eq!(binomial::<f64>(6, 0), 1.0);
        assert_eq!(binomial::<f64>(3, 4), 0.0);
    }

    #[test]
    fn expm1_small_and_large() {
        let z = cx::<f64>(1e-10, -2e-10);
        let e = expm1(z);
        assert!((e - z - z * z * 0.5).norm() < 1e-15 * z.norm());
        let z = cx::<f64>(1.5, 2.0);
        assert!((expm1(z) - (z.exp() - cx(1.0, 0.0))).norm() < 1e-14);
    }

    #[test]
    fn rel_err_is_absolute_below_one() {
        let e = rel_err(cx::<f64>(1e-3, 0.0), cx(0.0, 0.0));
        assert!((e - 1e-3).abs() < 1e-18);
    }
}
