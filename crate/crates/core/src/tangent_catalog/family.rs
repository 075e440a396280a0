use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::bipoly::LaurentBiPoly;
use super::eigen::{rational_reconstruct, MAX_DENOMINATOR, RATIONAL_TOL};
use super::plane_field::PlaneField;
use crate::complex_poly::{Poly, RationalFn};
use crate::error::{Error, Result};
use crate::scalar::{cone, czero, re, to_f64, Real};

/// Coefficients below this (relative to the largest) count as zero in the
/// divisibility and cancellation checks.
pub const COEFF_TOL: f64 = 1e-12;

/// Parameterized polynomial vector fields; `z, w` play the role of `x, t`
/// (or `x, y`) in every variant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase", bound = "T: Real")]
pub enum FamilySpec<T: Real> {
    /// `(a x + b) d/dx + A(x) t d/dt`.
    I {
        a: Complex<T>,
        b: Complex<T>,
        #[serde(rename = "A")]
        big_a: Poly<T>,
    },
    /// `a t d/dt + A(x^m t^n) (n x d/dx - m t d/dt)`.
    Ii {
        a: Complex<T>,
        m: u32,
        n: u32,
        #[serde(rename = "A")]
        big_a: Poly<T>,
    },
    /// `a z d/dz + (A(z) w - (a k + A(z))/z^k) d/dw`, `A = -a k + A0`.
    Iii {
        a: Complex<T>,
        k: u32,
        #[serde(rename = "A0")]
        a0: Poly<T>,
    },
    /// `a (w z^k - 1)/z^k d/dw + A(y) (n z d/dz + (-m w + (m - n k)/z^k) d/dw)`
    /// with `y = z^(m - n k) (w z^k - 1)^n` and `A = a/(m - n k) + A0`.
    Iv {
        a: Complex<T>,
        k: u32,
        m: u32,
        n: u32,
        #[serde(rename = "A0")]
        a0: Poly<T>,
    },
    /// `a(z) d/dw`.
    Suzuki1 { a: Poly<T> },
    /// `g(z) (w - s(z)) d/dw` with `g s` a polynomial.
    Suzuki2 { g: Poly<T>, s: RationalFn<T> },
    /// `lambda(t) (n z d/dz + m w d/dw)`: constant `lambda` when `m > 0`,
    /// polynomial in `t = z^(-m) w^n` when `m < 0`.
    Suzuki3 { m: i32, n: u32, lambda: Poly<T> },
    /// `gamma(t)/z^l (n z^(l+1) d/dz - ((m + n l) z^l w + m p + n z p') d/dw)`
    /// with `t = z^m (z^l w + p(z))^n`.
    Suzuki4 {
        m: u32,
        n: u32,
        l: u32,
        p: Poly<T>,
        gamma: Poly<T>,
    },
    /// `lambda x d/dx + (a(x) y + c(x)) d/dy`.
    Prop6a { lambda: Complex<T>, a: Poly<T>, c: Poly<T> },
    /// `x (n f(x^m y^n) + alpha) d/dx - y (m f(x^m y^n) + beta) d/dy`.
    Prop6b {
        m: u32,
        n: u32,
        f: Poly<T>,
        alpha: Complex<T>,
        beta: Complex<T>,
    },
    /// `r x d/dx + s y d/dy`.
    Prop7 { r: u32, s: u32 },
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

fn coprime_positive(m: u32, n: u32) -> Result<()> {
    if m == 0 || n == 0 {
        return Err(invalid(format!("m = {m}, n = {n} must be positive")));
    }
    if gcd(m as u64, n as u64) != 1 {
        return Err(invalid(format!("m = {m}, n = {n} are not coprime")));
    }
    Ok(())
}

fn small<T: Real>(c: Complex<T>, scale: T) -> bool {
    c.norm() <= T::lit(COEFF_TOL) * scale.max(T::one())
}

/// Requires the coefficients of `p` below degree `k` to vanish.
fn divisible_by_power<T: Real>(p: &Poly<T>, k: usize, what: &str) -> Result<()> {
    for j in 0..k.min(p.coeffs().len()) {
        if !small(p.coeff(j), p.norm()) {
            return Err(invalid(format!("{what} has a nonzero coefficient of degree {j} < {k}")));
        }
    }
    Ok(())
}

/// A positive rational `p/q` that is neither an integer nor a unit fraction.
fn proper_positive_ratio(x: Complex<f64>, what: &str) -> Result<()> {
    if x.im.abs() > RATIONAL_TOL * x.norm().max(1.0) {
        return Err(invalid(format!("{what} = {x} is not real")));
    }
    match rational_reconstruct(x.re, MAX_DENOMINATOR, RATIONAL_TOL) {
        Some((p, q)) if p > 0 && q > 1 && p > 1 => Ok(()),
        Some((p, q)) => Err(invalid(format!("{what} = {p}/{q} is not in Q+ minus N+ and 1/N+"))),
        None => Err(invalid(format!("{what} = {} is not rational within tolerance", x.re))),
    }
}

fn c64<T: Real>(z: Complex<T>) -> Complex<f64> {
    Complex::new(to_f64(z.re), to_f64(z.im))
}

fn lit<T: Real>(x: f64) -> LaurentBiPoly<T> {
    LaurentBiPoly::constant(re(T::lit(x)))
}

fn zpow<T: Real>(i: i32) -> LaurentBiPoly<T> {
    LaurentBiPoly::monomial(cone(), i, 0)
}

/// Drops negative powers of `z` that cancelled up to rounding; fails if any
/// survives.
pub fn holomorphic_part<T: Real>(b: &LaurentBiPoly<T>) -> Result<LaurentBiPoly<T>> {
    let tol = T::lit(COEFF_TOL) * b.norm().max(T::one());
    let mut out = LaurentBiPoly::zero();
    let mut worst: Option<(i32, T)> = None;
    for (i, j, c) in b.terms() {
        if i >= 0 {
            out = out.add(&LaurentBiPoly::monomial(c, i, j));
        } else if c.norm() > tol && worst.is_none_or(|(k, m)| i < k || (i == k && c.norm() > m)) {
            worst = Some((i, c.norm()));
        }
    }
    match worst {
        Some((power, modulus)) => Err(Error::NotHolomorphic { power, modulus: to_f64(modulus) }),
        None => Ok(out),
    }
}

impl<T: Real> FamilySpec<T> {
    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::I { .. } => "i",
            FamilySpec::Ii { .. } => "ii",
            FamilySpec::Iii { .. } => "iii",
            FamilySpec::Iv { .. } => "iv",
            FamilySpec::Suzuki1 { .. } => "suzuki1",
            FamilySpec::Suzuki2 { .. } => "suzuki2",
            FamilySpec::Suzuki3 { .. } => "suzuki3",
            FamilySpec::Suzuki4 { .. } => "suzuki4",
            FamilySpec::Prop6a { .. } => "prop6a",
            FamilySpec::Prop6b { .. } => "prop6b",
            FamilySpec::Prop7 { .. } => "prop7",
        }
    }

    /// Checks the parameter constraints of the variant.
    pub fn validate(&self) -> Result<()> {
        match self {
            FamilySpec::I { big_a, .. } => {
                if big_a.is_zero() {
                    return Err(invalid("A must not vanish identically"));
                }
            }
            FamilySpec::Ii { m, n, big_a, .. } => {
                coprime_positive(*m, *n)?;
                if big_a.is_zero() {
                    return Err(invalid("A must not vanish identically"));
                }
            }
            FamilySpec::Iii { k, a0, .. } => {
                if *k == 0 {
                    return Err(invalid("k must be positive"));
                }
                divisible_by_power(a0, *k as usize, "A0")?;
            }
            FamilySpec::Iv { k, m, n, a0, .. } => {
                if *k == 0 || *m == 0 || *n == 0 {
                    return Err(invalid("k, m, n must be positive"));
                }
                if *m <= n * k {
                    return Err(invalid(format!("need m > n k, got m = {m}, n k = {}", n * k)));
                }
                divisible_by_power(a0, *k as usize, "A0")?;
            }
            FamilySpec::Suzuki1 { .. } => {}
            FamilySpec::Suzuki2 { g, s } => {
                let (_, rem) = (g * s.num()).divrem(s.den());
                if rem.norm() > T::lit(COEFF_TOL) * (g.norm() * s.num().norm()).max(T::one()) {
                    return Err(invalid("g s is not a polynomial"));
                }
            }
            FamilySpec::Suzuki3 { m, n, lambda } => {
                coprime_positive(m.unsigned_abs(), *n)?;
                if *m > 0 && !lambda.is_constant() {
                    return Err(invalid("lambda must be constant when m > 0"));
                }
                if lambda.is_zero() {
                    return Err(invalid("lambda must not vanish identically"));
                }
            }
            FamilySpec::Suzuki4 { m, n, l, p, gamma } => {
                coprime_positive(*m, *n)?;
                if *l == 0 {
                    if !p.is_zero() {
                        return Err(invalid("p must vanish when l = 0"));
                    }
                } else {
                    if p.degree().is_some_and(|d| d >= *l as usize) {
                        return Err(invalid("deg p must be below l"));
                    }
                    if small(p.coeff(0), p.norm()) {
                        return Err(invalid("p(0) must be nonzero when l > 0"));
                    }
                }
                let order = l.div_ceil(*m).max(1) as usize;
                divisible_by_power(gamma, order, "gamma")?;
            }
            FamilySpec::Prop6a { lambda, a, .. } => {
                let a0 = a.coeff(0);
                if lambda.norm().is_zero() || a0.norm().is_zero() {
                    return Err(invalid("lambda and a(0) must be nonzero"));
                }
                proper_positive_ratio(c64(*lambda / a0), "lambda/a(0)")?;
            }
            FamilySpec::Prop6b { m, n, f, alpha, beta } => {
                if *m == 0 || *n == 0 {
                    return Err(invalid("m, n must be positive"));
                }
                divisible_by_power(f, 1, "f")?;
                let mm = re(T::lit(*m as f64));
                let nn = re(T::lit(*n as f64));
                if (*alpha * mm - *beta * nn).norm().is_zero() {
                    return Err(invalid("alpha m - beta n must be nonzero"));
                }
                if beta.norm().is_zero() {
                    return Err(invalid("beta must be nonzero"));
                }
                proper_positive_ratio(c64(-*alpha / *beta), "-alpha/beta")?;
            }
            FamilySpec::Prop7 { r, s } => coprime_positive(*r, *s)?,
        }
        Ok(())
    }

    /// `(P, Q)` over Laurent coefficients, before the holomorphy check.
    pub fn laurent_components(&self) -> Result<(LaurentBiPoly<T>, LaurentBiPoly<T>)> {
        self.validate()?;
        let z = LaurentBiPoly::<T>::z();
        let w = LaurentBiPoly::<T>::w();
        let konst = |c: Complex<T>| LaurentBiPoly::constant(c);
        let of_z = |p: &Poly<T>| LaurentBiPoly::from_poly_z(p);
        Ok(match self {
            FamilySpec::I { a, b, big_a } => (z.scale(*a).add(&konst(*b)), of_z(big_a).mul(&w)),
            FamilySpec::Ii { a, m, n, big_a } => {
                let y = z.pow(*m).mul(&w.pow(*n));
                let ay = y.compose_into(big_a);
                let p = ay.mul(&z).scale(re(T::lit(*n as f64)));
                let q = w.scale(*a).sub(&ay.mul(&w).scale(re(T::lit(*m as f64))));
                (p, q)
            }
            FamilySpec::Iii { a, k, a0 } => {
                let ak = *a * T::lit(*k as f64);
                let big_a = of_z(a0).sub(&konst(ak));
                let q = big_a.mul(&w).sub(&konst(ak).add(&big_a).mul(&zpow(-(*k as i32))));
                (z.scale(*a), q)
            }
            FamilySpec::Iv { a, k, m, n, a0 } => {
                let e = (m - n * k) as i32;
                let zk = zpow::<T>(-(*k as i32));
                let wzk = w.mul(&zpow(*k as i32)).sub(&lit(1.0));
                let y = zpow::<T>(e).mul(&wzk.pow(*n));
                let big_a = y.compose_into(a0).add(&konst(*a / T::lit(e as f64)));
                let p = big_a.mul(&z).scale(re(T::lit(*n as f64)));
                let inner = w.scale(re(-T::lit(*m as f64))).add(&zk.scale(re(T::lit(e as f64))));
                let q = wzk.mul(&zk).scale(*a).add(&big_a.mul(&inner));
                (p, q)
            }
            FamilySpec::Suzuki1 { a } => (LaurentBiPoly::zero(), of_z(a)),
            FamilySpec::Suzuki2 { g, s } => {
                let (gs, _) = (g * s.num()).divrem(s.den());
                (LaurentBiPoly::zero(), of_z(g).mul(&w).sub(&of_z(&gs)))
            }
            FamilySpec::Suzuki3 { m, n, lambda } => {
                let t = z.pow(m.unsigned_abs()).mul(&w.pow(*n));
                let lt = if *m > 0 { konst(lambda.coeff(0)) } else { t.compose_into(lambda) };
                let p = lt.mul(&z).scale(re(T::lit(*n as f64)));
                let q = lt.mul(&w).scale(re(T::lit(*m as f64)));
                (p, q)
            }
            FamilySpec::Suzuki4 { m, n, l, p, gamma } => {
                let (mf, nf, lf) = (T::lit(*m as f64), T::lit(*n as f64), T::lit(*l as f64));
                let inner = w.mul(&zpow(*l as i32)).add(&of_z(p));
                let t = z.pow(*m).mul(&inner.pow(*n));
                let g = t.compose_into(gamma);
                let zp = &Poly::identity() * &p.derivative();
                let tail = of_z(&(&p.scale(re(mf)) + &zp.scale(re(nf)))).mul(&zpow(-(*l as i32)));
                let bracket = w.scale(re(mf + nf * lf)).add(&tail);
                (g.mul(&z).scale(re(nf)), g.mul(&bracket).scale(re(-T::one())))
            }
            FamilySpec::Prop6a { lambda, a, c } => (z.scale(*lambda), of_z(a).mul(&w).add(&of_z(c))),
            FamilySpec::Prop6b { m, n, f, alpha, beta } => {
                let fy = z.pow(*m).mul(&w.pow(*n)).compose_into(f);
                let p = z.mul(&fy.scale(re(T::lit(*n as f64))).add(&konst(*alpha)));
                let q = w.mul(&fy.scale(re(T::lit(*m as f64))).add(&konst(*beta))).scale(re(-T::one()));
                (p, q)
            }
            FamilySpec::Prop7 { r, s } => (z.scale(re(T::lit(*r as f64))), w.scale(re(T::lit(*s as f64)))),
        })
    }

    /// A zero of the field at which its eigenratio is defined, when the
    /// variant has a canonical one.
    pub fn designated_zero(&self) -> Option<(Complex<T>, Complex<T>)> {
        let o = czero::<T>();
        match self {
            FamilySpec::I { a, b, .. } if !a.norm().is_zero() => Some((-*b / *a, o)),
            FamilySpec::Ii { .. } | FamilySpec::Prop6b { .. } | FamilySpec::Prop7 { .. } => Some((o, o)),
            FamilySpec::Suzuki3 { .. } => Some((o, o)),
            FamilySpec::Iii { a, k, a0 } if !a.norm().is_zero() => {
                Some((o, -a0.coeff(*k as usize) / (*a * T::lit(*k as f64))))
            }
            FamilySpec::Prop6a { a, c, .. } if !a.coeff(0).norm().is_zero() => Some((o, -c.coeff(0) / a.coeff(0))),
            _ => None,
        }
    }

    /// The (iii) or (iv) entry produced by conjugating this (i) or (ii) entry
    /// with `(x, t) -> (x, t + 1/x^k)`.
    pub fn alpha_target(&self, k: u32) -> Result<FamilySpec<T>> {
        match self {
            FamilySpec::I { a, b, big_a } if b.norm().is_zero() => Ok(FamilySpec::Iii {
                a: *a,
                k,
                a0: big_a + &Poly::constant(*a * T::lit(k as f64)),
            }),
            FamilySpec::Ii { a, m, n, big_a } if *m > n * k => Ok(FamilySpec::Iv {
                a: *a,
                k,
                m: *m,
                n: *n,
                a0: big_a - &Poly::constant(*a / T::lit((m - n * k) as f64)),
            }),
            _ => Err(invalid(format!("no conjugate catalog entry for {} with k = {k}", self.name()))),
        }
    }
}

pub fn instantiate_family<T: Real>(spec: &FamilySpec<T>) -> Result<PlaneField<T>> {
    let (p, q) = spec.laurent_components()?;
    PlaneField::from_bipoly(&holomorphic_part(&p)?, &holomorphic_part(&q)?)
}

/// Pushforward of a (i) entry with `b = 0` or a (ii) entry under
/// `(x, t) -> (x, t + 1/x^k)`, over Laurent coefficients.
pub fn alpha_conjugate<T: Real>(spec: &FamilySpec<T>, k: u32) -> Result<PlaneField<T>> {
    match spec {
        FamilySpec::I { b, .. } if b.norm().is_zero() => {}
        FamilySpec::Ii { .. } => {}
        _ => return Err(invalid("alpha conjugation applies to (i) with b = 0 or to (ii)")),
    }
    let (p, q) = spec.laurent_components()?;
    let ki = k as i32;
    let repl = LaurentBiPoly::w().sub(&zpow(-ki));
    let pt = p.substitute_w(&repl);
    let qt = q.substitute_w(&repl);
    let shear = LaurentBiPoly::monomial(re(-T::lit(k as f64)), -ki - 1, 0);
    let q_new = if k == 0 { qt } else { shear.mul(&pt).add(&qt) };
    PlaneField::from_bipoly(&holomorphic_part(&pt)?, &holomorphic_part(&q_new)?)
}
