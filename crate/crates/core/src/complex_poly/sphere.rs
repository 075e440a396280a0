use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// A point of the Riemann sphere.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real", rename_all = "lowercase")]
pub enum SpherePoint<T: Real> {
    Finite(Complex<T>),
    Infinity,
}

impl<T: Real> SpherePoint<T> {
    pub fn finite(&self) -> Option<Complex<T>> {
        match *self {
            SpherePoint::Finite(z) => Some(z),
            SpherePoint::Infinity => None,
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, SpherePoint::Infinity)
    }

    /// `1/w` with `1/0 = ∞` and `1/∞ = 0`.
    pub fn recip(&self) -> Self {
        match *self {
            SpherePoint::Infinity => SpherePoint::Finite(Complex::new(T::zero(), T::zero())),
            SpherePoint::Finite(z) if z.norm().is_zero() => SpherePoint::Infinity,
            SpherePoint::Finite(z) => SpherePoint::Finite(z.inv()),
        }
    }

    /// Chordal distance, normalized so that `d(0, ∞) = 1`.
    pub fn chordal(&self, other: &Self) -> T {
        let one = T::one();
        match (*self, *other) {
            (SpherePoint::Infinity, SpherePoint::Infinity) => T::zero(),
            (SpherePoint::Finite(z), SpherePoint::Infinity)
            | (SpherePoint::Infinity, SpherePoint::Finite(z)) => one / (one + z.norm_sqr()).sqrt(),
            (SpherePoint::Finite(a), SpherePoint::Finite(b)) => {
                (a - b).norm() / ((one + a.norm_sqr()).sqrt() * (one + b.norm_sqr()).sqrt())
            }
        }
    }

    /// Maps a possibly non-finite complex value to the sphere.
    pub fn from_value(z: Complex<T>) -> Self {
        if z.re.is_finite() && z.im.is_finite() {
            SpherePoint::Finite(z)
        } else {
            SpherePoint::Infinity
        }
    }
}

impl<T: Real> From<Complex<T>> for SpherePoint<T> {
    fn from(z: Complex<T>) -> Self {
        SpherePoint::Finite(z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    #[test]
    fn chordal_basics() {
        let zero = SpherePoint::Finite(cx::<f64>(0.0, 0.0));
        assert!((zero.chordal(&SpherePoint::Infinity) - 1.0).abs() < 1e-15);
        let a = SpherePoint::Finite(cx::<f64>(2.0, 1.0));
        assert!((a.chordal(&a.recip().recip())).abs() < 1e-15);
        // inversion is an isometry
        let b = SpherePoint::Finite(cx::<f64>(-0.3, 0.8));
        assert!((a.chordal(&b) - a.recip().chordal(&b.recip())).abs() < 1e-15);
    }
}
