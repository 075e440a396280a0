use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::family::FamilySpec;
use super::plane_field::PlaneField;
use crate::complex_poly::Poly;
use crate::entire_expr::ExpPoly;
use crate::error::{Error, Result};
use crate::flow_oracle::{integrate, IntegrationSpec};
use crate::gap_constructor::psi;
use crate::scalar::{cone, czero, to_f64, Real};

/// `x(tau)` for `x' = a x + b`, `x(0) = x0`.
fn affine_orbit<T: Real>(a: Complex<T>, b: Complex<T>, x0: Complex<T>) -> ExpPoly<T> {
    if a.norm().is_zero() {
        ExpPoly::term(Poly::new(vec![x0, b]), czero())
    } else {
        let c = b / a;
        ExpPoly::term(Poly::constant(x0 + c), a).add(&ExpPoly::constant(-c))
    }
}

/// Time-`t` flow of a (i), (ii), (iii) or Prop7 entry, entire in `t`.
pub fn closed_flow_family<T: Real>(
    spec: &FamilySpec<T>,
    t: Complex<T>,
    p: (Complex<T>, Complex<T>),
) -> Result<(Complex<T>, Complex<T>)> {
    spec.validate()?;
    let (x0, w0) = p;
    match spec {
        FamilySpec::I { a, b, big_a } => {
            let x = affine_orbit(*a, *b, x0);
            let growth = x.compose_into(big_a).integral_from_zero(t);
            Ok((x.eval(t), w0 * growth.exp()))
        }
        FamilySpec::Ii { a, m, n, big_a } => {
            // y = x^m t^n obeys y' = n a y
            let (mf, nf) = (T::lit(*m as f64), T::lit(*n as f64));
            let y0 = x0.powu(*m) * w0.powu(*n);
            let y = ExpPoly::term(Poly::constant(y0), *a * nf);
            let int_a = y.compose_into(big_a).integral_from_zero(t);
            Ok((x0 * (int_a * nf).exp(), w0 * (*a * t - int_a * mf).exp()))
        }
        FamilySpec::Iii { a, k, a0 } => {
            // w' = A(z) w - B(z), B = A0/z^k, z = z0 e^(a t);
            // with E~ = int_0^t e^(k a s) B(z(s)) ds and E = z0^k E~,
            // w = w0 e^(-a k t + E) - e^(-a k t) E~ (e^E - 1)/E
            let kf = T::lit(*k as f64);
            let b = Poly::new(a0.coeffs().iter().skip(*k as usize).copied().collect());
            let z = ExpPoly::term(Poly::constant(x0), *a);
            let shift = ExpPoly::term(Poly::one(), *a * kf);
            let e_tilde = shift.mul(&z.compose_into(&b)).integral_from_zero(t);
            let e = x0.powu(*k) * e_tilde;
            let decay = (-*a * kf * t).exp();
            let w = w0 * decay * e.exp() - decay * e_tilde * psi(e, cone());
            Ok((z.eval(t), w))
        }
        FamilySpec::Prop7 { r, s } => Ok((
            x0 * (t * T::lit(*r as f64)).exp(),
            w0 * (t * T::lit(*s as f64)).exp(),
        )),
        _ => Err(Error::Unsupported(format!("no closed-form flow for family {}", spec.name()))),
    }
}

/// Numerical flow of a plane field along the straight segment to `t`.
pub fn oracle_flow<T: Real>(
    x: &PlaneField<T>,
    t: Complex<T>,
    p: (Complex<T>, Complex<T>),
) -> Result<(Complex<T>, Complex<T>)> {
    Ok(integrate(|z, w| x.eval(z, w), p, &IntegrationSpec::to(t))?.end)
}

/// Largest relative drift of `y^r / x^s` along the `r x d/dx + s y d/dy` flow,
/// over both the closed form and the oracle.
pub fn first_integral_drift<T: Real>(
    r: u32,
    s: u32,
    start: (Complex<T>, Complex<T>),
    times: &[Complex<T>],
) -> Result<T> {
    if start.0.norm().is_zero() {
        return Err(Error::Domain("first integral is undefined on x = 0".into()));
    }
    let spec = FamilySpec::Prop7 { r, s };
    let field = super::family::instantiate_family(&spec)?;
    let integral = |p: (Complex<T>, Complex<T>)| p.1.powu(r) / p.0.powu(s);
    let i0 = integral(start);
    let scale = T::one().max(i0.norm());
    let mut worst = T::zero();
    for &t in times {
        let a = closed_flow_family(&spec, t, start)?;
        let b = oracle_flow(&field, t, start)?;
        for q in [a, b] {
            worst = worst.max((integral(q) - i0).norm() / scale);
        }
    }
    Ok(worst)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompletenessReport {
    pub starts: usize,
    pub directions: usize,
    pub horizon: f64,
    pub escapes: Vec<String>,
    pub pass: bool,
}

/// Bounded-horizon evidence: integrates from every start towards
/// `horizon e^(2 pi i j / directions)` and records escapes. This is not a
/// proof of completeness.
pub fn completeness_evidence<T: Real>(
    x: &PlaneField<T>,
    starts: &[(Complex<T>, Complex<T>)],
    horizon: T,
    directions: usize,
) -> CompletenessReport {
    let mut escapes = Vec::new();
    for (i, &p) in starts.iter().enumerate() {
        for j in 0..directions {
            let theta = T::lit(std::f64::consts::TAU * j as f64 / directions as f64);
            let t = Complex::from_polar(horizon, theta);
            if let Err(e) = oracle_flow(x, t, p) {
                escapes.push(format!("start {i}, direction {j}: {e}"));
            }
        }
    }
    CompletenessReport {
        starts: starts.len(),
        directions,
        horizon: to_f64(horizon),
        pass: escapes.is_empty(),
        escapes,
    }
}

/// Residual of the group law `flow(t1 + t2) = flow(t2, flow(t1))`.
pub fn group_law_residual<T: Real>(
    spec: &FamilySpec<T>,
    t1: Complex<T>,
    t2: Complex<T>,
    p: (Complex<T>, Complex<T>),
) -> Result<T> {
    let a = closed_flow_family(spec, t1 + t2, p)?;
    let b = closed_flow_family(spec, t2, closed_flow_family(spec, t1, p)?)?;
    let scale = T::one().max(a.0.norm()).max(a.1.norm());
    Ok((a.0 - b.0).norm().max((a.1 - b.1).norm()) / scale)
}
