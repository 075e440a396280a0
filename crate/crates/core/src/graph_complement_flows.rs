//! The vertical fields `Z^u = e^u (q1 w - q) d/dw` and the maps built from
//! their flows.
//!
//! On a fiber with `c = e^(u(z)) q1(z)` the flow is
//! `w(t) = s + (w - s) e^(ct) = w e^(ct) - e^u q (e^(ct) - 1)/c`; the second
//! form is entire in `z` and is used where `q1(z)` is small.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::complex_poly::RationalFn;
use crate::entire_expr::EntireExpr;
use crate::error::{Error, Result};
use crate::gap_constructor::{psi, GapCertificate};
use crate::scalar::{czero, fmt_cx, two_pi_i, Real};

/// Relative size of `|q1(z)|` below which the entire form of the flow is used.
pub const NEAR_ZERO_Q1: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FiberType {
    /// `q1(z) = 0`: the fiber is one trajectory isomorphic to the plane.
    TypeC,
    /// `q1(z) != 0`: periodic trajectories, plus the fixed point `s(z)`.
    TypeCStar,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct VerticalFieldZu<T: Real> {
    pub s: RationalFn<T>,
    pub u: EntireExpr<T>,
}

impl<T: Real> VerticalFieldZu<T> {
    pub fn new(s: RationalFn<T>, u: EntireExpr<T>) -> Self {
        VerticalFieldZu { s, u }
    }

    /// `c(z) = e^(u(z)) q1(z)`.
    pub fn rate(&self, z: Complex<T>) -> Complex<T> {
        self.u.eval(z).exp() * self.s.den().eval(z)
    }

    pub fn eval(&self, z: Complex<T>, w: Complex<T>) -> (Complex<T>, Complex<T>) {
        let q = self.s.num().eval(z);
        let q1 = self.s.den().eval(z);
        (czero(), self.u.eval(z).exp() * (q1 * w - q))
    }

    pub(crate) fn near_zero(&self, z: Complex<T>) -> bool {
        self.s.den().eval(z).norm() < T::lit(NEAR_ZERO_Q1) * self.s.den().norm()
    }

    pub fn flow(&self, t: Complex<T>, z: Complex<T>, w: Complex<T>) -> (Complex<T>, Complex<T>) {
        let eu = self.u.eval(z).exp();
        let q1 = self.s.den().eval(z);
        let c = eu * q1;
        if self.near_zero(z) {
            let q = self.s.num().eval(z);
            (z, w * (c * t).exp() - eu * q * psi(c, t))
        } else {
            let s = self.s.num().eval(z) / q1;
            (z, s + (w - s) * (c * t).exp())
        }
    }

    /// The flow evaluated as `w e^(ct) + R(z)` where `R` is the removable
    /// quotient `q (1 - e^(ct)) / q1` in `z`, expanded by jets near the zeros
    /// of `q1`. Slower than [`VerticalFieldZu::flow`]; kept as a cross-check.
    pub fn flow_via_quotient(&self, t: Complex<T>, z: Complex<T>, w: Complex<T>) -> Result<(Complex<T>, Complex<T>)> {
        let ct = EntireExpr::prod(vec![
            EntireExpr::constant(t),
            EntireExpr::exp(self.u.clone()),
            EntireExpr::poly(self.s.den().clone()),
        ]);
        let numer = EntireExpr::prod(vec![
            EntireExpr::poly(self.s.num().clone()),
            EntireExpr::sum(vec![EntireExpr::one(), EntireExpr::neg(EntireExpr::exp(ct))]),
        ]);
        let r = EntireExpr::removable_quotient(numer, self.s.den().clone())?;
        Ok((z, w * (self.rate(z) * t).exp() + r.eval(z)))
    }

    pub fn classify(&self, z: Complex<T>) -> FiberType {
        if self.s.is_pole(z) {
            FiberType::TypeC
        } else {
            FiberType::TypeCStar
        }
    }

    /// Generator `2 pi i / c(z)` of the times fixing every point of the fiber.
    pub fn period(&self, z: Complex<T>) -> Result<Complex<T>> {
        match self.classify(z) {
            FiberType::TypeC => Err(Error::TypeCFiber(fmt_cx(z))),
            FiberType::TypeCStar => Ok(two_pi_i::<T>() / self.rate(z)),
        }
    }

    /// `(t, z, w)` samples of the trajectory through `(z, w)` along the
    /// segment from 0 to `t_max`.
    pub fn trajectory(
        &self,
        z: Complex<T>,
        w: Complex<T>,
        t_max: Complex<T>,
        steps: usize,
    ) -> Vec<(Complex<T>, Complex<T>, Complex<T>)> {
        let n = steps.max(1);
        (0..=n)
            .map(|k| {
                let t = t_max * (T::from_usize_lossy(k) / T::from_usize_lossy(n));
                let (zz, ww) = self.flow(t, z, w);
                (t, zz, ww)
            })
            .collect()
    }
}

/// `f^u(z, t) = phi^u(t, z, h(z))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct DominatingMapF<T: Real> {
    pub cert: GapCertificate<T>,
    pub field: VerticalFieldZu<T>,
}

impl<T: Real> DominatingMapF<T> {
    pub fn new(cert: GapCertificate<T>, u: EntireExpr<T>) -> Self {
        let field = VerticalFieldZu::new(cert.s.clone(), u);
        DominatingMapF { cert, field }
    }

    /// The member with `u = -g1`, for which `c = g`.
    pub fn with_u_minus_g1(cert: GapCertificate<T>) -> Self {
        let u = EntireExpr::neg(EntireExpr::poly(cert.g1.clone()));
        DominatingMapF::new(cert, u)
    }

    pub fn s(&self) -> &RationalFn<T> {
        &self.cert.s
    }

    /// Away from the zeros of `q1` this uses `h - s = -e^(g1)/q1`, which
    /// keeps the gap even when it is far below the size of `s`.
    pub fn eval(&self, z: Complex<T>, t: Complex<T>) -> (Complex<T>, Complex<T>) {
        if self.field.near_zero(z) {
            return self.field.flow(t, z, self.cert.h.eval(z));
        }
        let q1 = self.s().den().eval(z);
        let s = self.s().num().eval(z) / q1;
        (z, s - (self.cert.g1.eval(z) + self.field.rate(z) * t).exp() / q1)
    }

    /// `d f2 / dt = -e^(u + g1) e^(ct)`, the Jacobian determinant.
    pub fn jacobian(&self, z: Complex<T>, t: Complex<T>) -> Complex<T> {
        let u = self.field.u.eval(z);
        let g1 = self.cert.g1.eval(z);
        -(u + g1 + self.field.rate(z) * t).exp()
    }

    /// A time `t` with `f(z0, t) = (z0, w0)`.
    ///
    /// Uses the principal logarithm on periodic fibers and the linear formula
    /// on fibers over poles of `s`, then polishes with Newton steps.
    pub fn preimage(&self, z0: Complex<T>, w0: Complex<T>) -> Result<Complex<T>> {
        let q = self.s().num().eval(z0);
        let q1 = self.s().den().eval(z0);
        let eu = self.field.u.eval(z0).exp();
        let mut t = match self.field.classify(z0) {
            FiberType::TypeC => (self.cert.h.eval(z0) - w0) / (eu * q),
            FiberType::TypeCStar => {
                // g (s - w0) = e^(-g1) (q - q1 w0)
                let gap = q - q1 * w0;
                if gap.norm() <= T::lit(1e-14) * (q.norm() + (q1 * w0).norm()) {
                    return Err(Error::Domain(format!(
                        "target ({}, {}) lies on graph(s)",
                        fmt_cx(z0),
                        fmt_cx(w0)
                    )));
                }
                let arg = (-self.cert.g1.eval(z0)).exp() * gap;
                arg.ln() / (eu * q1)
            }
        };
        for _ in 0..4 {
            let f = self.eval(z0, t).1 - w0;
            let d = self.jacobian(z0, t);
            let step = f / d;
            if !(step.re.is_finite() && step.im.is_finite()) {
                break;
            }
            t = t - step;
            if step.norm() <= T::epsilon() * (T::one() + t.norm()) {
                break;
            }
        }
        if t.re.is_finite() && t.im.is_finite() {
            Ok(t)
        } else {
            Err(Error::Numerical(format!("preimage solve diverged at z = {}", fmt_cx(z0))))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex_poly::Poly;
    use crate::gap_constructor::construct_gap;
    use std::f64::consts::{E, PI};

    fn cx(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn inv_z() -> RationalFn<f64> {
        RationalFn::new(Poly::from_reals(&[1.0]), Poly::from_reals(&[0.0, 1.0])).unwrap()
    }

    fn zu0(s: RationalFn<f64>) -> VerticalFieldZu<f64> {
        VerticalFieldZu::new(s, EntireExpr::zero())
    }

    #[test]
    fn field_examples() {
        let f = zu0(inv_z());
        assert_eq!(f.eval(cx(1.0, 0.0), cx(2.0, 0.0)), (cx(0.0, 0.0), cx(1.0, 0.0)));
        assert_eq!(f.eval(cx(2.0, 0.0), cx(0.5, 0.0)).1, cx(0.0, 0.0));
        let zero = zu0(RationalFn::from_poly(Poly::zero()));
        assert_eq!(zero.eval(cx(5.0, 0.0), cx(3.0, 0.0)).1, cx(3.0, 0.0));
    }

    #[test]
    fn flow_examples() {
        let f = zu0(inv_z());
        let w = cx(0.3, -2.0);
        let t = cx(0.4, 0.9);
        let got = f.flow(t, cx(1.0, 0.0), w).1;
        assert!((got - (cx(1.0, 0.0) + (w - cx(1.0, 0.0)) * t.exp())).norm() < 1e-14);
        let back = f.flow(cx(0.0, 2.0 * PI), cx(1.0, 0.0), w).1;
        assert!((back - w).norm() < 1e-13);
        assert!((f.flow(t, cx(0.0, 0.0), w).1 - (w - t)).norm() < 1e-15);
    }

    #[test]
    fn dominating_map_examples() {
        let m = DominatingMapF::new(construct_gap(&inv_z()).unwrap(), EntireExpr::zero());
        assert!((m.eval(cx(0.0, 0.0), cx(0.7, 0.2)).1 + cx(0.7, 0.2)).norm() < 1e-15);
        assert!(m.eval(cx(1.0, 0.0), cx(0.0, 0.0)).1.norm() < 1e-15);
        assert!((m.jacobian(cx(0.0, 0.0), cx(0.0, 0.0)) + cx(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn preimage_examples() {
        let m = DominatingMapF::new(construct_gap(&inv_z()).unwrap(), EntireExpr::zero());
        let t = m.preimage(cx(1.0, 0.0), cx(1.0 - E, 0.0)).unwrap();
        assert!((t - cx(1.0, 0.0)).norm() < 1e-12);
        let t = m.preimage(cx(0.0, 0.0), cx(-5.0, 0.0)).unwrap();
        assert!((t - cx(5.0, 0.0)).norm() < 1e-12);
        assert!(m.preimage(cx(2.0, 0.0), cx(0.5, 0.0)).is_err());
        let sq = RationalFn::from_poly(Poly::from_reals(&[0.0, 0.0, 1.0]));
        let m = DominatingMapF::new(construct_gap(&sq).unwrap(), EntireExpr::zero());
        assert!(m.preimage(cx(0.0, 0.0), cx(-1.0, 0.0)).unwrap().norm() < 1e-14);
    }

    #[test]
    fn period_examples() {
        let f = zu0(inv_z());
        assert!((f.period(cx(1.0, 0.0)).unwrap() - cx(0.0, 2.0 * PI)).norm() < 1e-15);
        assert!((f.period(cx(2.0, 0.0)).unwrap() - cx(0.0, PI)).norm() < 1e-15);
        assert!(matches!(f.period(cx(0.0, 0.0)), Err(Error::TypeCFiber(_))));
        assert_eq!(f.classify(cx(0.0, 0.0)), FiberType::TypeC);
        assert_eq!(f.classify(cx(1.0, 0.0)), FiberType::TypeCStar);
    }

    #[test]
    fn quotient_form_agrees_near_pole() {
        let s = RationalFn::new(Poly::from_reals(&[2.0, 1.0]), Poly::from_reals(&[0.0, 0.0, 1.0])).unwrap();
        let f = VerticalFieldZu::new(s, EntireExpr::poly(Poly::from_reals(&[0.1, 0.2])));
        for z in [cx(1e-5, 0.0), cx(0.0, 0.0), cx(3e-4, -2e-4)] {
            let t = cx(0.8, -1.1);
            let w = cx(0.2, 0.5);
            let a = f.flow(t, z, w).1;
            let b = f.flow_via_quotient(t, z, w).unwrap().1;
            assert!((a - b).norm() < 1e-9 * a.norm().max(1.0), "{a} vs {b}");
        }
    }
}
