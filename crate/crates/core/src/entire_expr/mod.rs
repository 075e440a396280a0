//! Entire functions of one variable as expression trees.

mod exppoly;

pub use exppoly::ExpPoly;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::complex_poly::{poly_roots, series, Poly, Root};
use crate::error::{Error, Result};
use crate::scalar::{cone, czero, fmt_cx, to_f64, Real};

/// Removability tolerance on the vanishing jet, relative to the largest jet
/// coefficient.
pub const EPS_JET: f64 = 1e-8;
/// Jet terms kept beyond the root multiplicity in the local series.
pub const JET_EXTRA: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real", try_from = "RawExpr<T>", into = "RawExpr<T>")]
pub enum EntireExpr<T: Real> {
    Const(Complex<T>),
    Var,
    Poly(Poly<T>),
    Sum(Vec<EntireExpr<T>>),
    Prod(Vec<EntireExpr<T>>),
    Neg(Box<EntireExpr<T>>),
    Exp(Box<EntireExpr<T>>),
    RemovableQuotient(Box<Quotient<T>>),
}

/// `num / den` certified to extend holomorphically across the roots of `den`.
#[derive(Clone, Debug, PartialEq)]
pub struct Quotient<T: Real> {
    num: EntireExpr<T>,
    den: Poly<T>,
    roots: Vec<Root<T>>,
    r_series: T,
    /// Taylor series of the quotient at each root, `JET_EXTRA + 1` terms.
    local: Vec<Vec<Complex<T>>>,
    /// Removability residual measured at construction.
    residual: T,
}

impl<T: Real> Quotient<T> {
    pub fn num(&self) -> &EntireExpr<T> {
        &self.num
    }
    pub fn den(&self) -> &Poly<T> {
        &self.den
    }
    pub fn roots(&self) -> &[Root<T>] {
        &self.roots
    }
    pub fn r_series(&self) -> T {
        self.r_series
    }
    pub fn residual(&self) -> T {
        self.residual
    }

    fn nearest_root(&self, z: Complex<T>) -> Option<(usize, T)> {
        self.roots
            .iter()
            .enumerate()
            .map(|(i, r)| (i, (z - r.value).norm()))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal))
    }

    /// Evaluates through the local series when `z` is within `r_series` of a
    /// root of the denominator, by direct division otherwise.
    fn eval(&self, z: Complex<T>) -> Complex<T> {
        match self.nearest_root(z) {
            Some((i, d)) if d < self.r_series => self.eval_series(i, z),
            _ => self.eval_direct(z),
        }
    }

    pub fn eval_direct(&self, z: Complex<T>) -> Complex<T> {
        self.num.eval(z) / self.den.eval(z)
    }

    pub fn eval_series_at_nearest(&self, z: Complex<T>) -> Option<Complex<T>> {
        self.nearest_root(z).map(|(i, _)| self.eval_series(i, z))
    }

    fn eval_series(&self, i: usize, z: Complex<T>) -> Complex<T> {
        series::eval(&self.local[i], z - self.roots[i].value)
    }

    /// Quotient series at root `i` with `n` terms.
    fn series_at_root(&self, i: usize, n: usize) -> Vec<Complex<T>> {
        let root = self.roots[i];
        let m = root.multiplicity;
        let nj = self.num.jet(root.value, n + m);
        let d = self.den.shift(root.value);
        let dtail: Vec<Complex<T>> = (m..=n + m).map(|k| d.coeff(k)).collect();
        series::div(&nj[m..], &dtail, n).expect("leading deflated coefficient is nonzero")
    }

    fn jet(&self, z0: Complex<T>, n: usize) -> Vec<Complex<T>> {
        match self.nearest_root(z0) {
            Some((i, d)) if d < self.r_series => {
                let extra = self.roots[i].multiplicity + JET_EXTRA;
                let local = self.series_at_root(i, n + 1 + extra);
                series::recenter(&local, z0 - self.roots[i].value, n + 1)
            }
            _ => {
                let a = self.num.jet(z0, n);
                let b = self.den.jet(z0, n);
                series::div(&a, &b, n + 1).expect("z0 is not a root of den")
            }
        }
    }
}

fn r_series_for<T: Real>(roots: &[Root<T>]) -> T {
    let mut min = T::one();
    for (i, a) in roots.iter().enumerate() {
        for b in &roots[..i] {
            min = min.min((a.value - b.value).norm());
        }
    }
    T::lit(1e-2) * min
}

impl<T: Real> EntireExpr<T> {
    pub fn constant(c: Complex<T>) -> Self {
        EntireExpr::Const(c)
    }

    pub fn zero() -> Self {
        EntireExpr::Const(czero())
    }

    pub fn one() -> Self {
        EntireExpr::Const(cone())
    }

    pub fn var() -> Self {
        EntireExpr::Var
    }

    pub fn poly(p: Poly<T>) -> Self {
        match p.degree() {
            None => EntireExpr::zero(),
            Some(0) => EntireExpr::Const(p.coeff(0)),
            _ => EntireExpr::Poly(p),
        }
    }

    /// The polynomial this node represents, if it is a constant or
    /// polynomial leaf.
    pub fn as_poly(&self) -> Option<Poly<T>> {
        match self {
            EntireExpr::Const(c) => Some(Poly::constant(*c)),
            EntireExpr::Var => Some(Poly::identity()),
            EntireExpr::Poly(p) => Some(p.clone()),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, EntireExpr::Const(c) if c.norm().is_zero())
    }

    fn is_one(&self) -> bool {
        matches!(self, EntireExpr::Const(c) if c.re == T::one() && c.im.is_zero())
    }

    pub fn sum(terms: Vec<EntireExpr<T>>) -> Self {
        let mut acc = Poly::zero();
        let mut rest = Vec::new();
        for t in terms {
            match t {
                EntireExpr::Sum(inner) => {
                    for u in inner {
                        match u.as_poly() {
                            Some(p) => acc = &acc + &p,
                            None => rest.push(u),
                        }
                    }
                }
                other => match other.as_poly() {
                    Some(p) => acc = &acc + &p,
                    None => rest.push(other),
                },
            }
        }
        if !acc.is_zero() {
            rest.push(EntireExpr::poly(acc));
        }
        match rest.len() {
            0 => EntireExpr::zero(),
            1 => rest.pop().expect("one term"),
            _ => EntireExpr::Sum(rest),
        }
    }

    pub fn prod(factors: Vec<EntireExpr<T>>) -> Self {
        let mut acc = Poly::one();
        let mut rest = Vec::new();
        for f in factors {
            match f {
                EntireExpr::Prod(inner) => {
                    for u in inner {
                        match u.as_poly() {
                            Some(p) => acc = &acc * &p,
                            None => rest.push(u),
                        }
                    }
                }
                other => match other.as_poly() {
                    Some(p) => acc = &acc * &p,
                    None => rest.push(other),
                },
            }
        }
        if acc.is_zero() {
            return EntireExpr::zero();
        }
        let lead = EntireExpr::poly(acc);
        if !lead.is_one() || rest.is_empty() {
            rest.insert(0, lead);
        }
        match rest.len() {
            1 => rest.pop().expect("one factor"),
            _ => EntireExpr::Prod(rest),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(e: EntireExpr<T>) -> Self {
        match e {
            EntireExpr::Neg(inner) => *inner,
            other => match other.as_poly() {
                Some(p) => EntireExpr::poly(-&p),
                None => EntireExpr::Neg(Box::new(other)),
            },
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn exp(e: EntireExpr<T>) -> Self {
        match e {
            EntireExpr::Const(c) => EntireExpr::Const(c.exp()),
            other => EntireExpr::Exp(Box::new(other)),
        }
    }

    /// `num / den` after checking that the jet of `num` vanishes to the
    /// multiplicity of each root of `den`.
    pub fn removable_quotient(num: EntireExpr<T>, den: Poly<T>) -> Result<Self> {
        Self::build_quotient(num, den, true, None)
    }

    /// `(a - b) / den`, with the removability residual measured against the
    /// jets of `a` and `b`, so that a difference cancelling to rounding noise
    /// is accepted.
    pub fn removable_difference_quotient(a: EntireExpr<T>, b: EntireExpr<T>, den: Poly<T>) -> Result<Self> {
        let num = EntireExpr::sum(vec![a.clone(), EntireExpr::neg(b.clone())]);
        let mag = move |z: Complex<T>, n: usize| a.jet_magnitude(z, n).max(b.jet_magnitude(z, n));
        Self::build_quotient(num, den, true, Some(&mag))
    }

    /// As [`EntireExpr::removable_quotient`] without the jet check; for
    /// quotients removable by construction (derivatives of valid ones).
    pub fn removable_quotient_unchecked(num: EntireExpr<T>, den: Poly<T>) -> Result<Self> {
        Self::build_quotient(num, den, false, None)
    }

    fn build_quotient(
        num: EntireExpr<T>,
        den: Poly<T>,
        check: bool,
        magnitude: Option<&dyn Fn(Complex<T>, usize) -> T>,
    ) -> Result<Self> {
        match den.degree() {
            None => return Err(Error::Invalid("removable quotient with zero denominator".into())),
            Some(0) => {
                return Ok(EntireExpr::prod(vec![num, EntireExpr::Const(den.coeff(0).inv())]))
            }
            _ => {}
        }
        let roots = poly_roots(&den)?;
        let mut residual = T::zero();
        for r in &roots {
            let m = r.multiplicity;
            let jet = num.jet(r.value, m + JET_EXTRA);
            let mut scale = num.jet_magnitude(r.value, m + JET_EXTRA);
            if let Some(f) = magnitude {
                scale = scale.max(f(r.value, m + JET_EXTRA));
            }
            let low = jet[..m].iter().fold(T::zero(), |a, c| a.max(c.norm()));
            let res = if scale.is_zero() { T::zero() } else { low / scale };
            if check && !(res < T::lit(EPS_JET)) {
                return Err(Error::NotRemovable { residual: to_f64(res), at: fmt_cx(r.value) });
            }
            residual = residual.max(res);
        }
        if let Some(p) = num.as_poly() {
            // exact polynomial division; the remainder is rounding noise
            let (q, _) = p.divrem(&den);
            return Ok(EntireExpr::poly(q));
        }
        let r_series = r_series_for(&roots);
        let mut quotient = Quotient { num, den, roots, r_series, local: Vec::new(), residual };
        quotient.local = (0..quotient.roots.len())
            .map(|i| quotient.series_at_root(i, JET_EXTRA + 1))
            .collect();
        Ok(EntireExpr::RemovableQuotient(Box::new(quotient)))
    }

    /// Largest jet coefficient at `z0`, taken over the summands of a sum so
    /// that a difference cancelling to rounding noise is measured against the
    /// size of its terms.
    pub fn jet_magnitude(&self, z0: Complex<T>, n: usize) -> T {
        match self {
            EntireExpr::Sum(terms) => terms.iter().fold(T::zero(), |a, t| a.max(t.jet_magnitude(z0, n))),
            EntireExpr::Neg(e) => e.jet_magnitude(z0, n),
            _ => self.jet(z0, n).iter().fold(T::zero(), |a, c| a.max(c.norm())),
        }
    }

    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        match self {
            EntireExpr::Const(c) => *c,
            EntireExpr::Var => z,
            EntireExpr::Poly(p) => p.eval(z),
            EntireExpr::Sum(ts) => ts.iter().fold(czero(), |a, t| a + t.eval(z)),
            EntireExpr::Prod(fs) => fs.iter().fold(cone(), |a, f| a * f.eval(z)),
            EntireExpr::Neg(e) => -e.eval(z),
            EntireExpr::Exp(e) => e.eval(z).exp(),
            EntireExpr::RemovableQuotient(q) => q.eval(z),
        }
    }

    /// Taylor coefficients at `z0` through order `n`.
    pub fn jet(&self, z0: Complex<T>, n: usize) -> Vec<Complex<T>> {
        let len = n + 1;
        match self {
            EntireExpr::Const(c) => {
                let mut v = vec![czero(); len];
                v[0] = *c;
                v
            }
            EntireExpr::Var => {
                let mut v = vec![czero(); len];
                v[0] = z0;
                if len > 1 {
                    v[1] = cone();
                }
                v
            }
            EntireExpr::Poly(p) => p.jet(z0, n),
            EntireExpr::Sum(ts) => ts
                .iter()
                .fold(vec![czero(); len], |acc, t| series::add(&acc, &t.jet(z0, n), len)),
            EntireExpr::Prod(fs) => {
                let mut one = vec![czero(); len];
                one[0] = cone();
                fs.iter().fold(one, |acc, f| series::mul(&acc, &f.jet(z0, n), len))
            }
            EntireExpr::Neg(e) => e.jet(z0, n).into_iter().map(|c| -c).collect(),
            EntireExpr::Exp(e) => series::exp(&e.jet(z0, n), len),
            EntireExpr::RemovableQuotient(q) => q.jet(z0, n),
        }
    }

    pub fn derive(&self) -> Self {
        match self {
            EntireExpr::Const(_) => EntireExpr::zero(),
            EntireExpr::Var => EntireExpr::one(),
            EntireExpr::Poly(p) => EntireExpr::poly(p.derivative()),
            EntireExpr::Sum(ts) => EntireExpr::sum(ts.iter().map(|t| t.derive()).collect()),
            EntireExpr::Prod(fs) => EntireExpr::sum(
                (0..fs.len())
                    .map(|i| {
                        EntireExpr::prod(
                            fs.iter()
                                .enumerate()
                                .map(|(j, f)| if i == j { f.derive() } else { f.clone() })
                                .collect(),
                        )
                    })
                    .collect(),
            ),
            EntireExpr::Neg(e) => EntireExpr::neg(e.derive()),
            EntireExpr::Exp(e) => EntireExpr::prod(vec![e.derive(), self.clone()]),
            EntireExpr::RemovableQuotient(q) => {
                let n = EntireExpr::sum(vec![
                    EntireExpr::prod(vec![q.num.derive(), EntireExpr::poly(q.den.clone())]),
                    EntireExpr::neg(EntireExpr::prod(vec![
                        q.num.clone(),
                        EntireExpr::poly(q.den.derivative()),
                    ])),
                ]);
                EntireExpr::removable_quotient_unchecked(n, &q.den * &q.den)
                    .expect("square of a nonconstant denominator")
            }
        }
    }
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(bound = "T: Real", tag = "op", rename_all = "lowercase")]
enum RawExpr<T: Real> {
    Const { value: Complex<T> },
    Var,
    Poly { coeffs: Poly<T> },
    Sum { args: Vec<EntireExpr<T>> },
    Prod { args: Vec<EntireExpr<T>> },
    Neg { arg: Box<EntireExpr<T>> },
    Exp { arg: Box<EntireExpr<T>> },
    Rq { num: Box<EntireExpr<T>>, den: Poly<T> },
}

impl<T: Real> TryFrom<RawExpr<T>> for EntireExpr<T> {
    type Error = Error;
    fn try_from(raw: RawExpr<T>) -> Result<Self> {
        Ok(match raw {
            RawExpr::Const { value } => EntireExpr::Const(value),
            RawExpr::Var => EntireExpr::Var,
            RawExpr::Poly { coeffs } => EntireExpr::Poly(coeffs),
            RawExpr::Sum { args } => EntireExpr::Sum(args),
            RawExpr::Prod { args } => EntireExpr::Prod(args),
            RawExpr::Neg { arg } => EntireExpr::Neg(arg),
            RawExpr::Exp { arg } => EntireExpr::Exp(arg),
            RawExpr::Rq { num, den } => EntireExpr::removable_quotient(*num, den)?,
        })
    }
}

impl<T: Real> From<EntireExpr<T>> for RawExpr<T> {
    fn from(e: EntireExpr<T>) -> Self {
        match e {
            EntireExpr::Const(value) => RawExpr::Const { value },
            EntireExpr::Var => RawExpr::Var,
            EntireExpr::Poly(coeffs) => RawExpr::Poly { coeffs },
            EntireExpr::Sum(args) => RawExpr::Sum { args },
            EntireExpr::Prod(args) => RawExpr::Prod { args },
            EntireExpr::Neg(arg) => RawExpr::Neg { arg },
            EntireExpr::Exp(arg) => RawExpr::Exp { arg },
            EntireExpr::RemovableQuotient(q) => RawExpr::Rq { num: Box::new(q.num), den: q.den },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    type E = EntireExpr<f64>;
    type P = Poly<f64>;

    fn one_minus_exp_over_z() -> E {
        let num = E::sum(vec![E::one(), E::neg(E::exp(E::var()))]);
        E::removable_quotient(num, P::identity()).unwrap()
    }

    #[test]
    fn exp_var_at_zero() {
        assert_eq!(E::exp(E::var()).eval(cx(0.0, 0.0)), cx(1.0, 0.0));
    }

    #[test]
    fn removable_quotient_values() {
        let e = one_minus_exp_over_z();
        assert!((e.eval(cx(0.0, 0.0)) - cx(-1.0, 0.0)).norm() < 1e-15);
        assert!((e.eval(cx(1.0, 0.0)) - cx(1.0 - std::f64::consts::E, 0.0)).norm() < 1e-14);
        let d = e.derive();
        assert!((d.eval(cx(0.0, 0.0)) - cx(-0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn non_removable_is_rejected() {
        let num = E::exp(E::var());
        assert!(matches!(
            E::removable_quotient(num, P::identity()),
            Err(Error::NotRemovable { .. })
        ));
    }

    #[test]
    fn jets() {
        let j = E::exp(E::var()).jet(cx(0.0, 0.0), 3);
        let want = [1.0, 1.0, 0.5, 1.0 / 6.0];
        for (a, b) in j.iter().zip(want) {
            assert!((a - cx(b, 0.0)).norm() < 1e-15);
        }
        let j = E::poly(P::from_reals(&[0.0, 0.0, 1.0])).jet(cx(1.0, 0.0), 2);
        assert_eq!(j, vec![cx(1.0, 0.0), cx(2.0, 0.0), cx(1.0, 0.0)]);
        let e = E::prod(vec![E::exp(E::var()), E::exp(E::neg(E::var()))]);
        let j = e.jet(cx(0.7, -0.2), 2);
        assert!((j[0] - cx(1.0, 0.0)).norm() < 1e-15 && j[1].norm() < 1e-15 && j[2].norm() < 1e-15);
    }

    #[test]
    fn polynomial_numerator_divides_exactly() {
        let e = E::removable_quotient(E::poly(P::from_reals(&[-1.0, 0.0, 1.0])), P::from_reals(&[-1.0, 1.0]))
            .unwrap();
        assert_eq!(e.as_poly().unwrap(), P::from_reals(&[1.0, 1.0]));
    }

    #[test]
    fn json_round_trip() {
        let e = one_minus_exp_over_z();
        let s = serde_json::to_string(&e).unwrap();
        assert!(s.contains(r#""op":"rq""#));
        let back: E = serde_json::from_str(&s).unwrap();
        assert!((back.eval(cx(0.3, 0.1)) - e.eval(cx(0.3, 0.1))).norm() < 1e-15);
        let bad = r#"{"op":"rq","num":{"op":"exp","arg":{"op":"var"}},"den":[[0,0],[1,0]]}"#;
        assert!(serde_json::from_str::<E>(bad).is_err());
    }
}
