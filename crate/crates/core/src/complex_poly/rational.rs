use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::{poly_gcd, poly_roots, series, Poly, Root, SpherePoint, EPS_POLE};
use crate::error::{Error, Result};
use crate::scalar::{fmt_cx, Real};

/// Principal part `sum_j c_j (z - pole)^(-j)` at one pole, stored as
/// `c_k, ..., c_1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct PrincipalPart<T: Real> {
    pub pole: Complex<T>,
    pub order: usize,
    pub coeffs: Vec<Complex<T>>,
}

impl<T: Real> PrincipalPart<T> {
    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        let x = (z - self.pole).inv();
        // coeffs[0] = c_k multiplies x^k
        self.coeffs.iter().fold(Complex::new(T::zero(), T::zero()), |acc, &c| (acc + c) * x)
    }
}

#[derive(Deserialize)]
#[serde(bound = "T: Real")]
struct RawRational<T: Real> {
    num: Poly<T>,
    den: Poly<T>,
}

/// `num / den` with coprime parts and monic denominator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real", try_from = "RawRational<T>")]
pub struct RationalFn<T: Real> {
    num: Poly<T>,
    den: Poly<T>,
}

impl<T: Real> TryFrom<RawRational<T>> for RationalFn<T> {
    type Error = Error;
    fn try_from(raw: RawRational<T>) -> Result<Self> {
        RationalFn::new(raw.num, raw.den)
    }
}

impl<T: Real> RationalFn<T> {
    /// Normalizes `num / den`: common factors are cancelled and the
    /// denominator made monic.
    pub fn new(num: Poly<T>, den: Poly<T>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Invalid("rational function with zero denominator".into()));
        }
        if num.is_zero() {
            return Ok(RationalFn { num, den: Poly::one() });
        }
        let g = poly_gcd(&num, &den);
        let (mut n, mut d) = if g.is_constant() {
            (num, den)
        } else {
            (num.divrem(&g).0, den.divrem(&g).0)
        };
        let lead = d.leading();
        n = n.scale(lead.inv());
        d = d.scale(lead.inv());
        Ok(RationalFn { num: n, den: d })
    }

    pub fn from_poly(p: Poly<T>) -> Self {
        RationalFn { num: p, den: Poly::one() }
    }

    pub fn constant(c: Complex<T>) -> Self {
        RationalFn::from_poly(Poly::constant(c))
    }

    pub fn num(&self) -> &Poly<T> {
        &self.num
    }

    pub fn den(&self) -> &Poly<T> {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// True when `|den(z)|` is within the pole threshold.
    pub fn is_pole(&self, z: Complex<T>) -> bool {
        self.den.eval(z).norm() <= T::lit(EPS_POLE) * self.den.norm()
    }

    /// Value on the sphere; poles map to infinity.
    pub fn eval(&self, z: Complex<T>) -> SpherePoint<T> {
        if self.is_pole(z) {
            SpherePoint::Infinity
        } else {
            SpherePoint::from_value(self.num.eval(z) / self.den.eval(z))
        }
    }

    /// `num(z)/den(z)` without the pole test.
    pub fn eval_raw(&self, z: Complex<T>) -> Complex<T> {
        self.num.eval(z) / self.den.eval(z)
    }

    /// Distinct poles with their orders.
    pub fn poles(&self) -> Result<Vec<Root<T>>> {
        if self.den.is_constant() {
            return Ok(Vec::new());
        }
        poly_roots(&self.den)
    }

    pub fn principal_parts(&self) -> Result<Vec<PrincipalPart<T>>> {
        if self.den.is_constant() {
            return Err(Error::Invalid("principal parts of a polynomial".into()));
        }
        self.poles()?
            .into_iter()
            .map(|r| {
                let k = r.multiplicity;
                let n = self.num.shift(r.value);
                // den = (z - pole)^k * rest; rest is read off after the k
                // vanishing Taylor coefficients
                let d = self.den.shift(r.value);
                let rest = &d.coeffs()[k.min(d.coeffs().len())..];
                let a = series::div(n.coeffs(), rest, k).ok_or_else(|| {
                    Error::Numerical(format!("pole at {} lost in deflation", fmt_cx(r.value)))
                })?;
                Ok(PrincipalPart { pole: r.value, order: k, coeffs: a })
            })
            .collect()
    }

    /// Taylor coefficients `a_0..=a_n` at a regular point.
    pub fn taylor_jet(&self, z0: Complex<T>, n: usize) -> Result<Vec<Complex<T>>> {
        if self.is_pole(z0) {
            return Err(Error::Domain(format!("taylor jet requested at pole {}", fmt_cx(z0))));
        }
        let a = self.num.jet(z0, n);
        let b = self.den.jet(z0, n);
        series::div(&a, &b, n + 1)
            .ok_or_else(|| Error::Domain(format!("taylor jet requested at pole {}", fmt_cx(z0))))
    }

    pub fn derivative(&self) -> Self {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        let d = &self.den * &self.den;
        RationalFn::new(n, d).expect("nonzero square denominator")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    type P = Poly<f64>;

    fn r(num: &[f64], den: &[f64]) -> RationalFn<f64> {
        RationalFn::new(P::from_reals(num), P::from_reals(den)).unwrap()
    }

    #[test]
    fn eval_examples() {
        let s = r(&[1.0], &[0.0, 1.0]);
        assert_eq!(s.eval(cx(2.0, 0.0)), SpherePoint::Finite(cx(0.5, 0.0)));
        assert_eq!(s.eval(cx(0.0, 0.0)), SpherePoint::Infinity);
        let s = r(&[0.0, 1.0], &[-1.0, 0.0, 1.0]);
        let v = s.eval(cx(2.0, 0.0)).finite().unwrap();
        assert!((v - cx(2.0 / 3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn normalization_cancels_common_factor() {
        // (z-1)(z+2) / (z-1)(z-3) -> (z+2)/(z-3)
        let s = r(&[-2.0, 1.0, 1.0], &[3.0, -4.0, 1.0]);
        assert_eq!(s.den().degree(), Some(1));
        assert!((s.num().coeff(0) - cx(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn principal_parts_examples() {
        let pp = r(&[0.0, 1.0], &[-1.0, 0.0, 1.0]).principal_parts().unwrap();
        assert_eq!(pp.len(), 2);
        for p in &pp {
            assert_eq!(p.order, 1);
            assert!((p.coeffs[0] - cx(0.5, 0.0)).norm() < 1e-13);
        }
        let pp = r(&[1.0], &[0.0, 0.0, 1.0]).principal_parts().unwrap();
        assert_eq!(pp[0].order, 2);
        assert!((pp[0].coeffs[0] - cx(1.0, 0.0)).norm() < 1e-15);
        assert!(pp[0].coeffs[1].norm() < 1e-15);
        let pp = r(&[1.0, 1.0], &[0.0, 1.0]).principal_parts().unwrap();
        assert!((pp[0].coeffs[0] - cx(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn taylor_jet_examples() {
        let j = r(&[1.0], &[1.0, -1.0]).taylor_jet(cx(0.0, 0.0), 2).unwrap();
        assert!(j.iter().all(|c| (*c - cx(1.0, 0.0)).norm() < 1e-15));
        let j = r(&[0.0, 1.0], &[1.0]).taylor_jet(cx(3.0, 0.0), 1).unwrap();
        assert_eq!(j, vec![cx(3.0, 0.0), cx(1.0, 0.0)]);
        let j = r(&[0.0, 1.0], &[-1.0, 0.0, 1.0]).taylor_jet(cx(0.0, 0.0), 2).unwrap();
        assert!(j[0].norm() < 1e-15 && (j[1] + cx(1.0, 0.0)).norm() < 1e-15 && j[2].norm() < 1e-15);
        assert!(r(&[1.0], &[0.0, 1.0]).taylor_jet(cx(0.0, 0.0), 1).is_err());
    }

    #[test]
    fn json_shape() {
        let s: RationalFn<f64> =
            serde_json::from_str(r#"{"num":[[1,0]],"den":[[0,0],[1,0]]}"#).unwrap();
        assert_eq!(s.den().degree(), Some(1));
        assert!(serde_json::from_str::<RationalFn<f64>>(r#"{"num":[[1,0]],"den":[]}"#).is_err());
    }
}
