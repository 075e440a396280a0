use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::scalar::{binomial, czero, Real};

/// Dense complex polynomial, coefficients in ascending degree.
///
/// The zero polynomial is the empty coefficient list; otherwise the trailing
/// coefficient is nonzero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real", from = "Vec<Complex<T>>", into = "Vec<Complex<T>>")]
pub struct Poly<T: Real> {
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> From<Vec<Complex<T>>> for Poly<T> {
    fn from(coeffs: Vec<Complex<T>>) -> Self {
        Poly::new(coeffs)
    }
}

impl<T: Real> From<Poly<T>> for Vec<Complex<T>> {
    fn from(p: Poly<T>) -> Self {
        p.coeffs
    }
}

impl<T: Real> Default for Poly<T> {
    fn default() -> Self {
        Poly::zero()
    }
}

impl<T: Real> Poly<T> {
    pub fn new(mut coeffs: Vec<Complex<T>>) -> Self {
        while coeffs.last().is_some_and(|c| c.re.is_zero() && c.im.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// Builds from real coefficients.
    pub fn from_reals(coeffs: &[f64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| Complex::new(T::lit(c), T::zero())).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Complex::new(T::one(), T::zero()))
    }

    pub fn constant(c: Complex<T>) -> Self {
        Poly::new(vec![c])
    }

    /// The identity polynomial `z`.
    pub fn identity() -> Self {
        Poly::monomial(Complex::new(T::one(), T::zero()), 1)
    }

    /// `c * z^k`.
    pub fn monomial(c: Complex<T>, k: usize) -> Self {
        let mut coeffs = vec![czero(); k + 1];
        coeffs[k] = c;
        Poly::new(coeffs)
    }

    /// `prod (z - r_i)`.
    pub fn from_roots(roots: &[Complex<T>]) -> Self {
        roots.iter().fold(Poly::one(), |acc, &r| {
            &acc * &Poly::new(vec![-r, Complex::new(T::one(), T::zero())])
        })
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    /// Coefficient of `z^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> Complex<T> {
        self.coeffs.get(k).copied().unwrap_or_else(czero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Complex<T> {
        self.coeffs.last().copied().unwrap_or_else(czero)
    }

    /// Max coefficient modulus.
    pub fn norm(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |m, c| m.max(c.norm()))
    }

    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        self.coeffs.iter().rev().fold(czero(), |acc, &c| acc * z + c)
    }

    /// Bound on `sum |a_k| |z|^k`, the scale of rounding in [`Poly::eval`].
    pub fn eval_abs(&self, z: Complex<T>) -> T {
        let r = z.norm();
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * T::from_usize_lossy(k))
                .collect(),
        )
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        Poly::new(self.coeffs.iter().map(|&a| a * c).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(self.leading().inv())
    }

    /// Drops trailing coefficients below `eps * norm`.
    pub fn trim_relative(&self, eps: T) -> Self {
        let cut = eps * self.norm();
        let mut coeffs = self.coeffs.clone();
        while coeffs.last().is_some_and(|c| c.norm() <= cut) {
            coeffs.pop();
        }
        Poly::new(coeffs)
    }

    /// Euclidean division `self = q * d + r`, `deg r < deg d`.
    ///
    /// Panics when `d` is the zero polynomial.
    pub fn divrem(&self, d: &Poly<T>) -> (Poly<T>, Poly<T>) {
        let dd = d.degree().expect("division by the zero polynomial");
        let Some(nd) = self.degree() else {
            return (Poly::zero(), Poly::zero());
        };
        if nd < dd {
            return (Poly::zero(), self.clone());
        }
        let lead_inv = d.leading().inv();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![czero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = rem[k + dd] * lead_inv;
            quot[k] = c;
            for (j, &dj) in d.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j] - c * dj;
            }
            rem[k + dd] = czero();
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Coefficients of `p(z0 + x)` in `x`.
    pub fn shift(&self, z0: Complex<T>) -> Self {
        // repeated synthetic division (Taylor–Horner)
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i + 1..n).rev() {
                let t = c[j] * z0;
                c[j - 1] = c[j - 1] + t;
            }
        }
        Poly::new(c)
    }

    /// Taylor coefficients at `z0` through order `n` (zero padded).
    pub fn jet(&self, z0: Complex<T>, n: usize) -> Vec<Complex<T>> {
        let s = self.shift(z0);
        (0..=n).map(|k| s.coeff(k)).collect()
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// `self(inner(z))`.
    pub fn compose(&self, inner: &Poly<T>) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, &c| &(&acc * inner) + &Poly::constant(c))
    }

    /// `p(z0 + x)` expanded through `binomial` (used as an independent check of
    /// [`Poly::shift`] in tests).
    pub fn shift_binomial(&self, z0: Complex<T>) -> Self {
        let n = self.coeffs.len();
        let mut out = vec![czero(); n];
        for (k, &a) in self.coeffs.iter().enumerate() {
            for (j, o) in out.iter_mut().enumerate().take(k + 1) {
                *o = *o + a * z0.powu((k - j) as u32) * binomial::<T>(k, j);
            }
        }
        Poly::new(out)
    }
}

impl<T: Real> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<T: Real> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<T: Real> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![czero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j] + a * b;
            }
        }
        Poly::new(out)
    }
}

impl<T: Real> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(|&c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<T: Real> $tr for Poly<T> {
            type Output = Poly<T>;
            fn $m(self, rhs: Poly<T>) -> Poly<T> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<T: Real> Neg for Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    type P = Poly<f64>;

    #[test]
    fn zero_is_empty_and_trailing_zeros_trim() {
        let p = P::new(vec![cx(1.0, 0.0), cx(0.0, 0.0)]);
        assert_eq!(p.degree(), Some(0));
        assert!(P::new(vec![cx(0.0, 0.0)]).is_zero());
        assert_eq!(P::zero().degree(), None);
    }

    #[test]
    fn divrem_reconstructs() {
        let a = P::from_reals(&[-1.0, 0.0, 0.0, 1.0]);
        let d = P::from_reals(&[-1.0, 1.0]);
        let (q, r) = a.divrem(&d);
        assert!(r.is_zero() || r.norm() < 1e-15);
        assert_eq!(q, P::from_reals(&[1.0, 1.0, 1.0]));
    }

    #[test]
    fn shift_matches_binomial_expansion() {
        let p = P::new(vec![cx(1.0, 2.0), cx(-3.0, 0.5), cx(0.0, 1.0), cx(2.0, -1.0)]);
        let z0 = cx(0.3, -1.2);
        let a = p.shift(z0);
        let b = p.shift_binomial(z0);
        for k in 0..4 {
            assert!((a.coeff(k) - b.coeff(k)).norm() < 1e-13);
        }
    }

    #[test]
    fn compose_and_pow_agree() {
        let p = P::from_reals(&[0.0, 0.0, 1.0]);
        let inner = P::from_reals(&[1.0, 1.0]);
        assert_eq!(p.compose(&inner), inner.pow(2));
    }
}
