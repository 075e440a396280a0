use std::collections::BTreeMap;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::complex_poly::Poly;
use crate::error::{Error, Result};
use crate::scalar::{cone, czero, to_f64, Real};

/// Polynomial in `w` whose coefficients are Laurent polynomials in `z`:
/// `sum c_(i,j) z^i w^j` with `i` of either sign.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct LaurentBiPoly<T: Real> {
    terms: BTreeMap<(i32, u32), Complex<T>>,
}

impl<T: Real> LaurentBiPoly<T> {
    pub fn zero() -> Self {
        LaurentBiPoly { terms: BTreeMap::new() }
    }

    pub fn constant(c: Complex<T>) -> Self {
        LaurentBiPoly::monomial(c, 0, 0)
    }

    /// `c z^i w^j`.
    pub fn monomial(c: Complex<T>, i: i32, j: u32) -> Self {
        let mut p = LaurentBiPoly::zero();
        p.add_term(i, j, c);
        p
    }

    pub fn z() -> Self {
        LaurentBiPoly::monomial(cone(), 1, 0)
    }

    pub fn w() -> Self {
        LaurentBiPoly::monomial(cone(), 0, 1)
    }

    /// A polynomial in `z` only.
    pub fn from_poly_z(p: &Poly<T>) -> Self {
        let mut out = LaurentBiPoly::zero();
        for (i, &c) in p.coeffs().iter().enumerate() {
            out.add_term(i as i32, 0, c);
        }
        out
    }

    fn add_term(&mut self, i: i32, j: u32, c: Complex<T>) {
        if c.norm().is_zero() {
            return;
        }
        let e = self.terms.entry((i, j)).or_insert_with(czero);
        *e = *e + c;
        if e.norm().is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, u32, Complex<T>)> + '_ {
        self.terms.iter().map(|(&(i, j), &c)| (i, j, c))
    }

    pub fn coeff(&self, i: i32, j: u32) -> Complex<T> {
        self.terms.get(&(i, j)).copied().unwrap_or_else(czero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn norm(&self) -> T {
        self.terms.values().fold(T::zero(), |m, c| m.max(c.norm()))
    }

    pub fn w_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, j)| j).max()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(i, j), &c) in &other.terms {
            out.add_term(i, j, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-cone::<T>()))
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        let mut out = LaurentBiPoly::zero();
        for (&(i, j), &a) in &self.terms {
            out.add_term(i, j, a * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = LaurentBiPoly::zero();
        for (&(i, j), &a) in &self.terms {
            for (&(k, l), &b) in &other.terms {
                out.add_term(i + k, j + l, a * b);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(LaurentBiPoly::constant(cone()), |acc, _| acc.mul(self))
    }

    /// `a(self)` for a univariate polynomial `a`.
    pub fn compose_into(&self, a: &Poly<T>) -> Self {
        a.coeffs()
            .iter()
            .rev()
            .fold(LaurentBiPoly::zero(), |acc, &c| acc.mul(self).add(&LaurentBiPoly::constant(c)))
    }

    /// `self(z, repl(z, w))`.
    pub fn substitute_w(&self, repl: &Self) -> Self {
        let deg = self.w_degree().unwrap_or(0);
        let powers: Vec<Self> = (0..=deg).map(|j| repl.pow(j)).collect();
        let mut out = LaurentBiPoly::zero();
        for (&(i, j), &c) in &self.terms {
            out = out.add(&powers[j as usize].mul(&LaurentBiPoly::monomial(c, i, 0)));
        }
        out
    }

    /// `self(zr, wr)`; only non-negative powers of `z` can be substituted.
    pub fn substitute(&self, zr: &Self, wr: &Self) -> Result<Self> {
        if let Some((power, modulus)) = self.worst_negative() {
            return Err(Error::NotHolomorphic { power, modulus: to_f64(modulus) });
        }
        let mut out = LaurentBiPoly::zero();
        for (&(i, j), &c) in &self.terms {
            out = out.add(&zr.pow(i as u32).mul(&wr.pow(j)).scale(c));
        }
        Ok(out)
    }

    pub fn eval(&self, z: Complex<T>, w: Complex<T>) -> Complex<T> {
        self.terms.iter().fold(czero(), |acc, (&(i, j), &c)| acc + c * z.powi(i) * w.powu(j))
    }

    pub fn d_z(&self) -> Self {
        let mut out = LaurentBiPoly::zero();
        for (&(i, j), &c) in &self.terms {
            if i != 0 {
                out.add_term(i - 1, j, c * T::lit(i as f64));
            }
        }
        out
    }

    pub fn d_w(&self) -> Self {
        let mut out = LaurentBiPoly::zero();
        for (&(i, j), &c) in &self.terms {
            if j != 0 {
                out.add_term(i, j - 1, c * T::lit(j as f64));
            }
        }
        out
    }

    /// Drops coefficients at most `eps` times the largest one.
    pub fn chop(&self, eps: T) -> Self {
        let cut = eps * self.norm();
        LaurentBiPoly {
            terms: self.terms.iter().filter(|(_, c)| c.norm() > cut).map(|(&k, &c)| (k, c)).collect(),
        }
    }

    /// The most negative `z` exponent with its largest coefficient modulus.
    pub fn worst_negative(&self) -> Option<(i32, T)> {
        let mut worst: Option<(i32, T)> = None;
        for (&(i, _), c) in &self.terms {
            if i < 0 {
                worst = match worst {
                    Some((k, m)) if k < i => Some((k, m)),
                    Some((k, m)) if k == i => Some((k, m.max(c.norm()))),
                    _ => Some((i, c.norm())),
                };
            }
        }
        worst
    }

    /// Coefficient of `w^j` as a polynomial in `z`; `None` if a negative
    /// power of `z` is present.
    pub fn w_coeff_poly(&self, j: u32) -> Option<Poly<T>> {
        let mut coeffs = Vec::new();
        for (&(i, jj), &c) in &self.terms {
            if jj != j {
                continue;
            }
            if i < 0 {
                return None;
            }
            let i = i as usize;
            if coeffs.len() <= i {
                coeffs.resize(i + 1, czero());
            }
            coeffs[i] = c;
        }
        Some(Poly::new(coeffs))
    }

    /// Largest coefficient difference.
    pub fn distance(&self, other: &Self) -> T {
        self.sub(other).norm()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn substitution_and_eval_agree() {
        // p = z w^2 + 3 w - 1
        let p = LaurentBiPoly::monomial(cx(1.0, 0.0), 1, 2)
            .add(&LaurentBiPoly::monomial(cx(3.0, 0.0), 0, 1))
            .add(&LaurentBiPoly::constant(cx(-1.0, 0.0)));
        // w -> w - z^-2
        let repl = LaurentBiPoly::w().sub(&LaurentBiPoly::monomial(cx(1.0, 0.0), -2, 0));
        let q = p.substitute_w(&repl);
        let z = cx(0.7, 0.3);
        let w = cx(-1.1, 0.4);
        assert!((q.eval(z, w) - p.eval(z, w - z.powi(-2))).norm() < 1e-13);
        assert_eq!(q.worst_negative().map(|x| x.0), Some(-3));
    }

    #[test]
    fn derivatives() {
        let p = LaurentBiPoly::monomial(cx(2.0, 0.0), -1, 3);
        assert_eq!(p.d_z(), LaurentBiPoly::monomial(cx(-2.0, 0.0), -2, 3));
        assert_eq!(p.d_w(), LaurentBiPoly::monomial(cx(6.0, 0.0), -1, 2));
    }
}
