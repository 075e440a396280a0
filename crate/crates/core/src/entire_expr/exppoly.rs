use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::complex_poly::Poly;
use crate::scalar::{czero, Real};

/// Rates at most this far apart (relative to `max(1, |mu|)`) are merged, and
/// rates this small are integrated with the power rule.
const RATE_EPS: f64 = 1e-13;

/// `sum_j p_j(tau) exp(mu_j tau)`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct ExpPoly<T: Real> {
    terms: Vec<(Poly<T>, Complex<T>)>,
}

fn same_rate<T: Real>(a: Complex<T>, b: Complex<T>) -> bool {
    (a - b).norm() <= T::lit(RATE_EPS) * T::one().max(a.norm())
}

impl<T: Real> ExpPoly<T> {
    pub fn zero() -> Self {
        ExpPoly { terms: Vec::new() }
    }

    pub fn constant(c: Complex<T>) -> Self {
        ExpPoly::term(Poly::constant(c), czero())
    }

    /// `p(tau) exp(mu tau)`.
    pub fn term(p: Poly<T>, mu: Complex<T>) -> Self {
        ExpPoly::zero().with(p, mu)
    }

    pub fn terms(&self) -> &[(Poly<T>, Complex<T>)] {
        &self.terms
    }

    fn with(mut self, p: Poly<T>, mu: Complex<T>) -> Self {
        if p.is_zero() {
            return self;
        }
        if let Some(i) = self.terms.iter().position(|(_, m)| same_rate(*m, mu)) {
            let sum = &self.terms[i].0 + &p;
            if sum.is_zero() {
                self.terms.remove(i);
            } else {
                self.terms[i].0 = sum;
            }
        } else {
            self.terms.push((p, mu));
        }
        self
    }

    pub fn add(&self, other: &Self) -> Self {
        other.terms.iter().fold(self.clone(), |acc, (p, m)| acc.with(p.clone(), *m))
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        self.terms.iter().fold(ExpPoly::zero(), |acc, (p, m)| acc.with(p.scale(c), *m))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut acc = ExpPoly::zero();
        for (p, m) in &self.terms {
            for (q, n) in &other.terms {
                acc = acc.with(p * q, *m + *n);
            }
        }
        acc
    }

    /// `a(self(tau))` for a polynomial `a`.
    pub fn compose_into(&self, a: &Poly<T>) -> Self {
        a.coeffs()
            .iter()
            .rev()
            .fold(ExpPoly::zero(), |acc, &c| acc.mul(self).add(&ExpPoly::constant(c)))
    }

    pub fn eval(&self, tau: Complex<T>) -> Complex<T> {
        self.terms.iter().fold(czero(), |acc, (p, m)| acc + p.eval(tau) * (*m * tau).exp())
    }

    pub fn derivative(&self) -> Self {
        self.terms
            .iter()
            .fold(ExpPoly::zero(), |acc, (p, m)| acc.with(&p.derivative() + &p.scale(*m), *m))
    }

    /// An antiderivative (not normalized at zero).
    ///
    /// `p e^(mu tau)` integrates to `e^(mu tau) sum_j (-1)^j p^(j) / mu^(j+1)`;
    /// a zero rate uses the power rule.
    pub fn antiderivative(&self) -> Self {
        let mut acc = ExpPoly::zero();
        for (p, m) in &self.terms {
            if m.norm() <= T::lit(RATE_EPS) {
                let coeffs = std::iter::once(czero())
                    .chain(
                        p.coeffs()
                            .iter()
                            .enumerate()
                            .map(|(k, &c)| c / T::from_usize_lossy(k + 1)),
                    )
                    .collect();
                acc = acc.with(Poly::new(coeffs), czero());
            } else {
                let inv = m.inv();
                let mut d = p.clone();
                let mut factor = inv;
                let mut out = Poly::zero();
                while !d.is_zero() {
                    out = &out + &d.scale(factor);
                    d = d.derivative();
                    factor = -factor * inv;
                }
                acc = acc.with(out, *m);
            }
        }
        acc
    }

    /// `int_0^tau self`.
    pub fn integral_from_zero(&self, tau: Complex<T>) -> Complex<T> {
        let f = self.antiderivative();
        f.eval(tau) - f.eval(czero())
    }

    /// Coefficient-wise distance to `other`, for exact-form comparisons.
    pub fn distance(&self, other: &Self) -> T {
        let diff = self.add(&other.scale(Complex::new(-T::one(), T::zero())));
        diff.terms.iter().fold(T::zero(), |acc, (p, _)| acc.max(p.norm()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    type X = ExpPoly<f64>;
    type P = Poly<f64>;

    #[test]
    fn antiderivative_examples() {
        let f = X::term(P::identity(), cx(1.0, 0.0)).antiderivative();
        assert_eq!(f, X::term(P::from_reals(&[-1.0, 1.0]), cx(1.0, 0.0)));
        let f = X::constant(cx(1.0, 0.0)).antiderivative();
        assert_eq!(f, X::term(P::identity(), cx(0.0, 0.0)));
        let f = X::term(P::one(), cx(2.0, 0.0)).antiderivative();
        assert_eq!(f, X::term(P::from_reals(&[0.5]), cx(2.0, 0.0)));
    }

    #[test]
    fn derivative_inverts_antiderivative() {
        let f = X::term(P::from_reals(&[1.0, -2.0, 0.5]), cx(0.3, 1.1))
            .add(&X::term(P::from_reals(&[0.0, 3.0]), cx(0.0, 0.0)));
        assert!(f.antiderivative().derivative().distance(&f) < 1e-12);
    }

    #[test]
    fn compose_matches_pointwise() {
        let x = X::term(P::one(), cx(0.5, 0.2)).add(&X::constant(cx(-1.0, 0.0)));
        let a = P::from_reals(&[2.0, 0.0, 1.0]);
        let ax = x.compose_into(&a);
        let tau = cx(0.7, -0.4);
        assert!((ax.eval(tau) - a.eval(x.eval(tau))).norm() < 1e-13);
    }
}
