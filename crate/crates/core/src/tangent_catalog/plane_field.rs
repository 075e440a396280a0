use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::bipoly::LaurentBiPoly;
use crate::complex_poly::Poly;
use crate::entire_expr::EntireExpr;
use crate::error::{Error, Result};
use crate::scalar::{binomial, cone, czero, re, Real};

/// `P d/dz + Q d/dw` with `P = sum_k p[k](z) t^k` and likewise for `Q`.
///
/// The fiber coordinate `t` is `w` itself unless a chart is set, in which
/// case `(z, w) = chart(z, t)`. Pushing forward by a fiber automorphism only
/// changes the chart, so no powers of `w - delta` are ever expanded.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct PlaneField<T: Real> {
    pub p: Vec<EntireExpr<T>>,
    pub q: Vec<EntireExpr<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chart: Option<FiberAutomorphism<T>>,
}

fn eval_w<T: Real>(coeffs: &[EntireExpr<T>], z: Complex<T>, w: Complex<T>) -> Complex<T> {
    coeffs.iter().rev().fold(czero(), |acc, c| acc * w + c.eval(z))
}

/// `sum c[k] t^k` and its derivative in `t`.
fn eval_dt<T: Real>(coeffs: &[EntireExpr<T>], z: Complex<T>, t: Complex<T>) -> (Complex<T>, Complex<T>) {
    coeffs.iter().rev().fold((czero(), czero()), |(v, d), c| (v * t + c.eval(z), d * t + v))
}

/// Values and `z`-derivatives of the coefficients at `z`.
fn jets<T: Real>(coeffs: &[EntireExpr<T>], z: Complex<T>) -> Vec<(Complex<T>, Complex<T>)> {
    coeffs
        .iter()
        .map(|c| {
            let j = c.jet(z, 1);
            (j[0], j.get(1).copied().unwrap_or_else(czero))
        })
        .collect()
}

fn bipoly_coeffs<T: Real>(b: &LaurentBiPoly<T>) -> Result<Vec<EntireExpr<T>>> {
    if let Some((power, modulus)) = b.worst_negative() {
        return Err(Error::NotHolomorphic { power, modulus: crate::scalar::to_f64(modulus) });
    }
    let deg = b.w_degree().unwrap_or(0);
    Ok((0..=deg)
        .map(|j| EntireExpr::poly(b.w_coeff_poly(j).unwrap_or_else(Poly::zero)))
        .collect())
}

fn trim<T: Real>(mut v: Vec<EntireExpr<T>>) -> Vec<EntireExpr<T>> {
    while v.last().is_some_and(EntireExpr::is_zero) {
        v.pop();
    }
    v
}

impl<T: Real> PlaneField<T> {
    pub fn new(p: Vec<EntireExpr<T>>, q: Vec<EntireExpr<T>>) -> Self {
        PlaneField { p: trim(p), q: trim(q), chart: None }
    }

    pub fn zero() -> Self {
        PlaneField::new(Vec::new(), Vec::new())
    }

    /// `(t, dt/dz, dt/dw)` at `(z, w)`.
    fn fiber_coord(&self, z: Complex<T>, w: Complex<T>) -> (Complex<T>, Complex<T>, Complex<T>) {
        match &self.chart {
            None => (w, czero(), cone()),
            Some(c) => {
                let g = c.gamma.jet(z, 1);
                let d = c.delta.jet(z, 1);
                let e = (-g[0]).exp();
                let t = e * (w - d[0]);
                let dg = g.get(1).copied().unwrap_or_else(czero);
                let dd = d.get(1).copied().unwrap_or_else(czero);
                (t, -dg * t - e * dd, e)
            }
        }
    }

    /// The same field with coefficients in powers of `w`.
    pub fn expanded(&self) -> Self {
        match &self.chart {
            None => self.clone(),
            Some(c) => PlaneField::new(substitute_fiber(&self.p, c), substitute_fiber(&self.q, c)),
        }
    }

    /// Fails with `NotHolomorphic` if a negative power of `z` survives.
    pub fn from_bipoly(p: &LaurentBiPoly<T>, q: &LaurentBiPoly<T>) -> Result<Self> {
        Ok(PlaneField::new(bipoly_coeffs(p)?, bipoly_coeffs(q)?))
    }

    /// Both components as bivariate polynomials, if every coefficient is a
    /// polynomial in `z`.
    pub fn as_bipoly(&self) -> Option<(LaurentBiPoly<T>, LaurentBiPoly<T>)> {
        if self.chart.is_some() {
            return self.expanded().as_bipoly();
        }
        let conv = |cs: &[EntireExpr<T>]| -> Option<LaurentBiPoly<T>> {
            let mut out = LaurentBiPoly::zero();
            for (j, c) in cs.iter().enumerate() {
                let p = c.as_poly()?;
                out = out.add(&LaurentBiPoly::from_poly_z(&p).mul(&LaurentBiPoly::w().pow(j as u32)));
            }
            Some(out)
        };
        Some((conv(&self.p)?, conv(&self.q)?))
    }

    pub fn eval(&self, z: Complex<T>, w: Complex<T>) -> (Complex<T>, Complex<T>) {
        let t = self.fiber_coord(z, w).0;
        (eval_w(&self.p, z, t), eval_w(&self.q, z, t))
    }

    /// `[[P_z, P_w], [Q_z, Q_w]]`.
    pub fn jacobian(&self, z: Complex<T>, w: Complex<T>) -> [[Complex<T>; 2]; 2] {
        let (t, tz, tw) = self.fiber_coord(z, w);
        let row = |cs: &[EntireExpr<T>]| {
            // z-derivative at fixed t
            let mut dz: Complex<T> = czero();
            let mut tk: Complex<T> = cone();
            for (_, d) in jets(cs, z) {
                dz = dz + d * tk;
                tk = tk * t;
            }
            let dt = eval_dt(cs, z, t).1;
            [dz + dt * tz, dt * tw]
        };
        [row(&self.p), row(&self.q)]
    }

    /// Largest coefficient discrepancy at the sample abscissae.
    pub fn coeff_distance(&self, other: &Self, zs: &[Complex<T>]) -> T {
        if self.chart.is_some() || other.chart.is_some() {
            return self.expanded().coeff_distance(&other.expanded(), zs);
        }
        let side = |a: &[EntireExpr<T>], b: &[EntireExpr<T>]| {
            let mut worst = T::zero();
            for k in 0..a.len().max(b.len()) {
                for &z in zs {
                    let x = a.get(k).map_or_else(czero, |e| e.eval(z));
                    let y = b.get(k).map_or_else(czero, |e| e.eval(z));
                    worst = worst.max((x - y).norm());
                }
            }
            worst
        };
        side(&self.p, &other.p).max(side(&self.q, &other.q))
    }

    /// `M X(M^-1 v)` for an invertible matrix `M`; polynomial fields only.
    pub fn linear_pushforward(&self, m: [[Complex<T>; 2]; 2]) -> Result<Self> {
        let (p, q) = self
            .as_bipoly()
            .ok_or_else(|| Error::Unsupported("linear pushforward needs polynomial coefficients".into()))?;
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if det.norm() <= T::epsilon() * (m[0][0].norm() + m[1][1].norm() + m[0][1].norm() + m[1][0].norm()) {
            return Err(Error::Invalid("singular linear map".into()));
        }
        let z = LaurentBiPoly::z();
        let w = LaurentBiPoly::w();
        let zr = z.scale(m[1][1] / det).sub(&w.scale(m[0][1] / det));
        let wr = w.scale(m[0][0] / det).sub(&z.scale(m[1][0] / det));
        let ps = p.substitute(&zr, &wr)?;
        let qs = q.substitute(&zr, &wr)?;
        let np = ps.scale(m[0][0]).add(&qs.scale(m[0][1]));
        let nq = ps.scale(m[1][0]).add(&qs.scale(m[1][1]));
        PlaneField::from_bipoly(&np, &nq)
    }
}

/// `(z, w) -> (z, e^(gamma(z)) w + delta(z))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct FiberAutomorphism<T: Real> {
    pub gamma: EntireExpr<T>,
    pub delta: EntireExpr<T>,
}

impl<T: Real> FiberAutomorphism<T> {
    pub fn new(gamma: EntireExpr<T>, delta: EntireExpr<T>) -> Self {
        FiberAutomorphism { gamma, delta }
    }

    pub fn identity() -> Self {
        FiberAutomorphism::new(EntireExpr::zero(), EntireExpr::zero())
    }

    /// `(z, w + s(z))`.
    pub fn translation(s: EntireExpr<T>) -> Self {
        FiberAutomorphism::new(EntireExpr::zero(), s)
    }

    pub fn apply(&self, z: Complex<T>, w: Complex<T>) -> (Complex<T>, Complex<T>) {
        (z, self.gamma.eval(z).exp() * w + self.delta.eval(z))
    }

    pub fn inverse(&self) -> Self {
        let g = EntireExpr::neg(self.gamma.clone());
        let d = EntireExpr::neg(EntireExpr::prod(vec![EntireExpr::exp(g.clone()), self.delta.clone()]));
        FiberAutomorphism::new(g, d)
    }

    /// `self o other`.
    pub fn compose(&self, other: &Self) -> Self {
        let g = EntireExpr::sum(vec![self.gamma.clone(), other.gamma.clone()]);
        let d = EntireExpr::sum(vec![
            EntireExpr::prod(vec![EntireExpr::exp(self.gamma.clone()), other.delta.clone()]),
            self.delta.clone(),
        ]);
        FiberAutomorphism::new(g, d)
    }

    pub fn jacobian(&self, z: Complex<T>, w: Complex<T>) -> [[Complex<T>; 2]; 2] {
        let g = self.gamma.jet(z, 1);
        let d = self.delta.jet(z, 1);
        let e = g[0].exp();
        let g1 = g.get(1).copied().unwrap_or_else(czero);
        let d1 = d.get(1).copied().unwrap_or_else(czero);
        [[cone(), czero()], [g1 * e * w + d1, e]]
    }
}

/// Coefficients of `sum_k c[k] (e^(-gamma) (w - delta))^k` as a polynomial in `w`.
fn substitute_fiber<T: Real>(c: &[EntireExpr<T>], phi: &FiberAutomorphism<T>) -> Vec<EntireExpr<T>> {
    let n = c.len();
    let mut out: Vec<Vec<EntireExpr<T>>> = vec![Vec::new(); n];
    for (k, ck) in c.iter().enumerate() {
        if ck.is_zero() {
            continue;
        }
        let ek = EntireExpr::exp(EntireExpr::prod(vec![
            EntireExpr::constant(re(-T::lit(k as f64))),
            phi.gamma.clone(),
        ]));
        for (j, slot) in out.iter_mut().enumerate().take(k + 1) {
            let mut f = vec![ck.clone(), ek.clone(), EntireExpr::constant(re(binomial::<T>(k, j)))];
            for _ in 0..(k - j) {
                f.push(EntireExpr::neg(phi.delta.clone()));
            }
            slot.push(EntireExpr::prod(f));
        }
    }
    out.into_iter().map(EntireExpr::sum).collect()
}

fn mul_w_poly<T: Real>(a: &[EntireExpr<T>], b: &[EntireExpr<T>]) -> Vec<EntireExpr<T>> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out: Vec<Vec<EntireExpr<T>>> = vec![Vec::new(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if !x.is_zero() && !y.is_zero() {
                out[i + j].push(EntireExpr::prod(vec![x.clone(), y.clone()]));
            }
        }
    }
    out.into_iter().map(EntireExpr::sum).collect()
}

fn add_w_poly<T: Real>(a: &[EntireExpr<T>], b: &[EntireExpr<T>]) -> Vec<EntireExpr<T>> {
    (0..a.len().max(b.len()))
        .map(|k| {
            let x = a.get(k).cloned().unwrap_or_else(EntireExpr::zero);
            let y = b.get(k).cloned().unwrap_or_else(EntireExpr::zero);
            EntireExpr::sum(vec![x, y])
        })
        .collect()
}

/// `phi_* X`, computed on the coefficient expressions.
pub fn pushforward<T: Real>(phi: &FiberAutomorphism<T>, x: &PlaneField<T>) -> PlaneField<T> {
    // in the fiber coordinate t of x, with w_old = e^(gamma_c) t + delta_c:
    //   P~ = P
    //   Q~ = (gamma' e^gamma w_old + delta') P + e^gamma Q
    let chart = x.chart.clone().unwrap_or_else(FiberAutomorphism::identity);
    let eg = EntireExpr::exp(phi.gamma.clone());
    let slope = EntireExpr::prod(vec![phi.gamma.derive(), eg.clone()]);
    let lin = vec![
        EntireExpr::sum(vec![phi.delta.derive(), EntireExpr::prod(vec![slope.clone(), chart.delta.clone()])]),
        EntireExpr::prod(vec![slope, EntireExpr::exp(chart.gamma.clone())]),
    ];
    let q = add_w_poly(&mul_w_poly(&lin, &x.p), &mul_w_poly(&[eg], &x.q));
    let mut out = PlaneField::new(x.p.clone(), q);
    out.chart = Some(phi.compose(&chart));
    out
}
