//! Complex polynomials and rational functions.

mod poly;
mod rational;
mod roots;
pub mod series;
mod sphere;

pub use poly::Poly;
pub use rational::{PrincipalPart, RationalFn};
pub use roots::{poly_roots, Root, CLUSTER_DELTA, ROOT_RESIDUAL};
pub use sphere::SpherePoint;

use crate::scalar::Real;

/// Relative coefficient tolerance for remainders in [`poly_gcd`].
pub const EPS_GCD: f64 = 1e-10;
/// Relative threshold below which a denominator value counts as a pole.
pub const EPS_POLE: f64 = 1e-13;

/// Monic gcd by the Euclidean algorithm.
///
/// A remainder whose coefficients all fall below `EPS_GCD` times the larger
/// of the two operand norms is treated as zero. Two zero inputs give zero.
pub fn poly_gcd<T: Real>(a: &Poly<T>, b: &Poly<T>) -> Poly<T> {
    let scale = a.norm().max(b.norm());
    let tol = T::lit(EPS_GCD) * scale;
    let (mut x, mut y) = (a.clone(), b.clone());
    if x.degree() < y.degree() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_zero() && y.norm() > tol {
        let (_, r) = x.divrem(&y);
        x = y;
        y = if r.norm() <= tol { Poly::zero() } else { r };
    }
    x.monic()
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = Poly<f64>;

    #[test]
    fn gcd_examples() {
        let g = poly_gcd(&P::from_reals(&[-1.0, 0.0, 1.0]), &P::from_reals(&[-1.0, 1.0]));
        assert!((&g - &P::from_reals(&[-1.0, 1.0])).norm() < 1e-14);
        let g = poly_gcd(&P::from_reals(&[1.0, 0.0, 1.0]), &P::from_reals(&[2.0, 1.0]));
        assert_eq!(g, P::one());
        let g = poly_gcd(&P::zero(), &P::from_reals(&[0.0, 3.0]));
        assert_eq!(g, P::identity());
    }
}
