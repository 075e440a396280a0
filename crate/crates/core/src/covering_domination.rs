//! The cusp `y^r = a x^s`, the monomial covering
//! `gamma(u, v) = (v^q u^r, v^p u^s)` with `p r - q s = 1`, and the dominating
//! map `Gamma(z, t) = gamma(z, a - e^t)` onto
//! `{x y (y^r - a x^s) != 0} U {(0, 0)}`.

use std::collections::BTreeMap;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{cone, czero, fmt_cx, is_finite, Real};
use crate::tangent_catalog::gcd;

/// Relative residual below which a computed preimage is accepted.
pub const PREIMAGE_TOL: f64 = 1e-8;

/// Smallest positive `(p, q)` with `p r - q s = 1`, scanning `p` upwards.
pub fn bezout(r: u32, s: u32) -> Result<(u32, u32)> {
    if r == 0 || s == 0 {
        return Err(Error::Invalid(format!("r = {r}, s = {s} must be positive")));
    }
    if gcd(r as u64, s as u64) != 1 {
        return Err(Error::Invalid(format!("r = {r} and s = {s} are not coprime")));
    }
    if r == 1 && s == 1 {
        return Err(Error::Invalid("r s = 1 is excluded".into()));
    }
    let (r64, s64) = (r as u64, s as u64);
    (1..=2 * s64 + 1)
        .find_map(|p| {
            let num = p * r64 - 1;
            (num > 0 && num % s64 == 0).then(|| (p as u32, (num / s64) as u32))
        })
        .ok_or_else(|| Error::Numerical(format!("no Bezout pair found for ({r}, {s})")))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct CuspCurve<T: Real> {
    pub r: u32,
    pub s: u32,
    pub a: Complex<T>,
    pub p: u32,
    pub q: u32,
}

#[derive(Deserialize)]
#[serde(bound = "T: Real")]
struct RawCusp<T: Real> {
    r: u32,
    s: u32,
    a: Complex<T>,
}

impl<'de, T: Real> Deserialize<'de> for CuspCurve<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawCusp::<T>::deserialize(d)?;
        CuspCurve::new(raw.r, raw.s, raw.a).map_err(serde::de::Error::custom)
    }
}

type Pt<T> = (Complex<T>, Complex<T>);

impl<T: Real> CuspCurve<T> {
    pub fn new(r: u32, s: u32, a: Complex<T>) -> Result<Self> {
        if a.norm().is_zero() {
            return Err(Error::Invalid("a must be nonzero".into()));
        }
        let (p, q) = bezout(r, s)?;
        Ok(CuspCurve { r, s, a, p, q })
    }

    /// `y^r - a x^s`.
    pub fn defining(&self, x: Complex<T>, y: Complex<T>) -> Complex<T> {
        y.powu(self.r) - self.a * x.powu(self.s)
    }

    /// `(v^q u^r, v^p u^s)`.
    pub fn gamma(&self, u: Complex<T>, v: Complex<T>) -> Pt<T> {
        (v.powu(self.q) * u.powu(self.r), v.powu(self.p) * u.powu(self.s))
    }

    /// `gamma(z, a - e^t)`.
    pub fn big_gamma(&self, z: Complex<T>, t: Complex<T>) -> Pt<T> {
        self.gamma(z, self.a - t.exp())
    }

    /// `(u, v) = (x^p / y^q, y^r / x^s)`.
    pub fn gamma_preimage(&self, x: Complex<T>, y: Complex<T>) -> Result<Pt<T>> {
        let zero = |c: Complex<T>| c.norm().is_zero();
        match (zero(x), zero(y)) {
            (true, true) => Ok((x, y)),
            (false, false) => Ok((x.powu(self.p) / y.powu(self.q), y.powu(self.r) / x.powu(self.s))),
            _ => Err(Error::Domain(format!(
                "({}, {}) lies on an axis and is not (0, 0)",
                fmt_cx(x),
                fmt_cx(y)
            ))),
        }
    }

    /// Membership in `{x y (y^r - a x^s) != 0} U {(0, 0)}`.
    pub fn membership(&self, x: Complex<T>, y: Complex<T>) -> bool {
        if x.norm().is_zero() && y.norm().is_zero() {
            return true;
        }
        // factor by factor, so that a tiny product cannot underflow to zero
        !(x.norm().is_zero() || y.norm().is_zero() || self.defining(x, y).norm().is_zero())
    }

    /// A point `(z, t)` with `Gamma(z, t) = (x, y)`, checked a posteriori.
    pub fn big_gamma_preimage(&self, x: Complex<T>, y: Complex<T>) -> Result<Pt<T>> {
        let (u, v) = self.gamma_preimage(x, y)?;
        if u.norm().is_zero() && v.norm().is_zero() {
            return Ok((u, czero()));
        }
        let t = (self.a - v).ln();
        if !is_finite(t) {
            return Err(Error::Domain(format!("({}, {}) lies on the cusp", fmt_cx(x), fmt_cx(y))));
        }
        let (x1, y1) = self.big_gamma(u, t);
        let scale = T::one().max(x.norm()).max(y.norm());
        let res = (x1 - x).norm().max((y1 - y).norm()) / scale;
        if !(res < T::lit(PREIMAGE_TOL)) {
            return Err(Error::Numerical(format!(
                "preimage residual {:e} at ({}, {})",
                crate::scalar::to_f64(res),
                fmt_cx(x),
                fmt_cx(y)
            )));
        }
        Ok((u, t))
    }

    /// Central-difference Jacobian determinant of `Gamma`.
    pub fn big_gamma_jacobian_fd(&self, z: Complex<T>, t: Complex<T>, h: T) -> Complex<T> {
        let hz = Complex::new(h, T::zero());
        let two_h = hz + hz;
        let dz = |f: &dyn Fn(Complex<T>) -> Pt<T>| {
            let (a, b) = (f(hz), f(-hz));
            ((a.0 - b.0) / two_h, (a.1 - b.1) / two_h)
        };
        let (xz, yz) = dz(&|e| self.big_gamma(z + e, t));
        let (xt, yt) = dz(&|e| self.big_gamma(z, t + e));
        xz * yt - xt * yz
    }
}

/// Exponents `(u, v) -> coefficient`, compared exactly.
type Monomials<T> = BTreeMap<(u64, u64), Complex<T>>;

fn monomial<T: Real>(c: Complex<T>, i: u64, j: u64) -> Monomials<T> {
    BTreeMap::from([((i, j), c)])
}

fn mul<T: Real>(a: &Monomials<T>, b: &Monomials<T>) -> Monomials<T> {
    let mut out = Monomials::new();
    for (&(i, j), &x) in a {
        for (&(k, l), &y) in b {
            let e = out.entry((i + k, j + l)).or_insert_with(czero::<T>);
            *e = *e + x * y;
        }
    }
    out.retain(|_, c| !c.norm().is_zero());
    out
}

fn add<T: Real>(a: &Monomials<T>, b: &Monomials<T>) -> Monomials<T> {
    let mut out = a.clone();
    for (&k, &c) in b {
        let e = out.entry(k).or_insert_with(czero::<T>);
        *e = *e + c;
    }
    out.retain(|_, c| !c.norm().is_zero());
    out
}

fn pow<T: Real>(a: &Monomials<T>, n: u32) -> Monomials<T> {
    (0..n).fold(monomial(cone(), 0, 0), |acc, _| mul(&acc, a))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    /// `(r s, q s)`, the exponents of `u` and `v` in the common factor.
    pub exponents: (u64, u64),
    pub pass: bool,
}

/// Expands `(v^p u^s)^r - a (v^q u^r)^s` and compares it term by term with
/// `u^(r s) v^(q s) (v - a)`.
pub fn identity_check<T: Real>(c: &CuspCurve<T>) -> IdentityReport {
    let x = monomial(cone(), c.r as u64, c.q as u64);
    let y = monomial(cone(), c.s as u64, c.p as u64);
    let lhs = add(&pow(&y, c.r), &mul(&monomial(-c.a, 0, 0), &pow(&x, c.s)));
    let (e_u, e_v) = (c.r as u64 * c.s as u64, c.q as u64 * c.s as u64);
    let factor = monomial(cone(), e_u, e_v);
    let rhs = mul(&factor, &add(&monomial(cone(), 0, 1), &monomial(-c.a, 0, 0)));
    IdentityReport { exponents: (e_u, e_v), pass: lhs == rhs }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn bezout_pairs() {
        assert_eq!(bezout(2, 3).unwrap(), (2, 1));
        assert_eq!(bezout(3, 2).unwrap(), (1, 1));
        assert_eq!(bezout(1, 2).unwrap(), (3, 1));
        assert!(bezout(2, 2).is_err());
        assert!(bezout(1, 1).is_err());
    }

    #[test]
    fn gamma_values() {
        let c = CuspCurve::new(2, 3, cx(1.0, 0.0)).unwrap();
        assert_eq!(c.gamma(cx(1.0, 0.0), cx(1.0, 0.0)), (cx(1.0, 0.0), cx(1.0, 0.0)));
        assert_eq!(c.gamma(cx(0.7, 0.2), cx(0.0, 0.0)), (cx(0.0, 0.0), cx(0.0, 0.0)));
        let (x, y) = c.gamma(cx(2.0, 0.0), cx(1.0, 0.0));
        assert_eq!((x, y), (cx(4.0, 0.0), cx(8.0, 0.0)));
        assert_eq!(c.defining(x, y), cx(0.0, 0.0));
    }

    #[test]
    fn identities() {
        let a = identity_check(&CuspCurve::new(2, 3, cx(1.0, 0.0)).unwrap());
        assert!(a.pass && a.exponents == (6, 3));
        let b = identity_check(&CuspCurve::new(3, 2, cx(2.0, 0.0)).unwrap());
        assert!(b.pass && b.exponents == (6, 2));
    }

    #[test]
    fn big_gamma_examples() {
        let c = CuspCurve::new(2, 3, cx(1.0, 0.0)).unwrap();
        assert_eq!(c.big_gamma(cx(0.0, 0.0), cx(3.0, -1.0)), (cx(0.0, 0.0), cx(0.0, 0.0)));
        let (x, y) = c.big_gamma(cx(1.0, 0.0), cx(0.0, std::f64::consts::PI));
        assert!((x - cx(2.0, 0.0)).norm() < 1e-15 && (y - cx(4.0, 0.0)).norm() < 1e-15);
        assert!(c.membership(x, y));
    }

    #[test]
    fn preimages() {
        let c = CuspCurve::new(2, 3, cx(1.0, 0.0)).unwrap();
        assert_eq!(c.gamma_preimage(cx(4.0, 0.0), cx(8.0, 0.0)).unwrap(), (cx(2.0, 0.0), cx(1.0, 0.0)));
        assert_eq!(c.gamma_preimage(cx(2.0, 0.0), cx(4.0, 0.0)).unwrap(), (cx(1.0, 0.0), cx(2.0, 0.0)));
        assert!(c.gamma_preimage(cx(0.0, 0.0), cx(5.0, 0.0)).is_err());
        assert!(c.big_gamma_preimage(cx(4.0, 0.0), cx(8.0, 0.0)).is_err());
        let (z, t) = c.big_gamma_preimage(cx(2.0, 0.0), cx(4.0, 0.0)).unwrap();
        let (x, y) = c.big_gamma(z, t);
        assert!((x - cx(2.0, 0.0)).norm() < 1e-14 && (y - cx(4.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn membership_cases() {
        let c = CuspCurve::new(3, 2, cx(8.0, 0.0)).unwrap();
        assert!(c.membership(cx(0.0, 0.0), cx(0.0, 0.0)));
        assert!(!c.membership(cx(1.0, 0.0), cx(0.0, 0.0)));
        assert!(!c.membership(cx(1.0, 0.0), cx(2.0, 0.0)));
        assert!(c.membership(cx(1.0, 0.0), cx(2.0, 1e-9)));
    }

    #[test]
    fn deserializes_with_bezout() {
        let c: CuspCurve<f64> = serde_json::from_str(r#"{"r":2,"s":3,"a":[1.0,0.0]}"#).unwrap();
        assert_eq!((c.p, c.q), (2, 1));
        assert!(serde_json::from_str::<CuspCurve<f64>>(r#"{"r":2,"s":4,"a":[1.0,0.0]}"#).is_err());
    }
}
