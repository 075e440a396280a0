//! Entire functions whose graph misses the graph of a rational function.
//!
//! For `s = q/q1` the construction picks a polynomial `g1` with
//! `e^(g1) = q mod (z - z_j)^(k_j)` at every zero `z_j` of `q1` (order `k_j`).
//! Then `h = (q - e^(g1))/q1` is entire and `h - s = -e^(g1)/q1` never
//! vanishes, while at the poles of `s` the function `h` stays finite.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::complex_poly::{series, Poly, RationalFn, EPS_POLE};
use crate::entire_expr::{EntireExpr, EPS_JET, JET_EXTRA};
use crate::error::{Error, Result};
use crate::sampling::{self, SampleSpec};
use crate::scalar::{czero, expm1, fmt_cx, Real};

/// `|t| (1 + |w|)` below which [`psi`] sums its series.
pub const PSI_SERIES_THRESHOLD: f64 = 1e-4;
/// Radius of the circles on which `|h|` is probed around each pole.
pub const POLE_CIRCLE_RADIUS: f64 = 1e-2;
/// Relative size below which a difference of two floating values is noise.
pub const SUBTRACTION_RESOLUTION: f64 = 1e-13;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct PoleDatum<T: Real> {
    pub pole: Complex<T>,
    pub order: usize,
    /// `g1(pole)`, a logarithm of `q(pole)`.
    pub log_value: Complex<T>,
    /// Sheet of the logarithm relative to the principal branch.
    pub branch: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct GapCertificate<T: Real> {
    pub s: RationalFn<T>,
    pub g1: Poly<T>,
    /// `q1 e^(-g1)`.
    pub g_expr: EntireExpr<T>,
    /// `(q - e^(g1))/q1`.
    pub h: EntireExpr<T>,
    pub pole_data: Vec<PoleDatum<T>>,
}

/// Polynomial of degree below the total jet length matching every prescribed
/// Taylor jet, from confluent divided differences.
pub fn hermite_interpolate<T: Real>(nodes: &[(Complex<T>, Vec<Complex<T>>)]) -> Result<Poly<T>> {
    for (i, (a, _)) in nodes.iter().enumerate() {
        for (b, _) in &nodes[..i] {
            if (*a - *b).norm() <= T::epsilon() * T::one().max(a.norm()) {
                return Err(Error::Domain(format!("duplicate interpolation node {}", fmt_cx(*a))));
            }
        }
    }
    // x[i] repeats each node once per jet entry; group[i] indexes the node
    let mut x = Vec::new();
    let mut group = Vec::new();
    for (g, (z, jet)) in nodes.iter().enumerate() {
        for _ in 0..jet.len() {
            x.push(*z);
            group.push(g);
        }
    }
    let n = x.len();
    if n == 0 {
        return Ok(Poly::zero());
    }
    // column-by-column divided differences, overwritten in place
    let mut col: Vec<Complex<T>> = group.iter().map(|&g| nodes[g].1[0]).collect();
    let mut newton = vec![col[0]];
    for k in 1..n {
        let mut next = Vec::with_capacity(n - k);
        for i in 0..n - k {
            if group[i] == group[i + k] {
                next.push(nodes[group[i]].1[k]);
            } else {
                next.push((col[i + 1] - col[i]) / (x[i + k] - x[i]));
            }
        }
        newton.push(next[0]);
        col = next;
    }
    // Newton form to monomial basis by Horner
    let mut p = Poly::constant(newton[n - 1]);
    for k in (0..n - 1).rev() {
        p = &(&p * &Poly::new(vec![-x[k], Complex::new(T::one(), T::zero())])) + &Poly::constant(newton[k]);
    }
    Ok(p)
}

/// Builds `g1`, `g` and `h` for `s`.
pub fn construct_gap<T: Real>(s: &RationalFn<T>) -> Result<GapCertificate<T>> {
    let q = s.num();
    let q1 = s.den();
    if q1.is_constant() {
        let shifted = q.scale(q1.coeff(0).inv());
        let h = &shifted - &Poly::one();
        return Ok(GapCertificate {
            s: s.clone(),
            g1: Poly::zero(),
            g_expr: EntireExpr::poly(q1.clone()),
            h: EntireExpr::poly(h),
            pole_data: Vec::new(),
        });
    }
    let poles = s.poles()?;
    let mut nodes = Vec::with_capacity(poles.len());
    let mut pole_data = Vec::with_capacity(poles.len());
    for r in &poles {
        let qz = q.eval(r.value);
        if qz.norm() < T::lit(EPS_POLE) * q.norm().max(T::min_positive_value()) {
            return Err(Error::Domain(format!(
                "numerator vanishes at pole {}: numerator and denominator share a zero",
                fmt_cx(r.value)
            )));
        }
        let jet = q.jet(r.value, r.multiplicity - 1);
        let log = series::log(&jet, r.multiplicity).expect("q(pole) is nonzero");
        pole_data.push(PoleDatum { pole: r.value, order: r.multiplicity, log_value: log[0], branch: 0 });
        nodes.push((r.value, log));
    }
    let g1 = hermite_interpolate(&nodes)?;
    let e_g1 = EntireExpr::exp(EntireExpr::poly(g1.clone()));
    let h = EntireExpr::removable_difference_quotient(EntireExpr::poly(q.clone()), e_g1, q1.clone())?;
    let g_expr = EntireExpr::prod(vec![
        EntireExpr::poly(q1.clone()),
        EntireExpr::exp(EntireExpr::neg(EntireExpr::poly(g1.clone()))),
    ]);
    Ok(GapCertificate { s: s.clone(), g1, g_expr, h, pole_data })
}

/// `(e^(tw) - 1)/t`, extended by `w` at `t = 0`.
pub fn psi<T: Real>(t: Complex<T>, w: Complex<T>) -> Complex<T> {
    if t.norm() * (T::one() + w.norm()) > T::lit(PSI_SERIES_THRESHOLD) {
        expm1(t * w) / t
    } else {
        // w + t w^2/2! + t^2 w^3/3! + ...
        let x = t * w;
        let mut term = w;
        let mut acc = czero();
        for k in 1..=12usize {
            acc = acc + term;
            term = term * x / T::from_usize_lossy(k + 1);
        }
        acc
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub samples: usize,
    /// Minimum of `|h(z) - s(z)|` over samples off the poles, by direct
    /// subtraction.
    pub min_difference: f64,
    /// Samples where the exact gap `|e^(g1)/q1|` is below
    /// [`SUBTRACTION_RESOLUTION`] times `max(|h|, |s|)`, so that subtraction
    /// in floating point cannot observe it, or where `h` overflows.
    pub unresolved: usize,
    /// Minimum of `|h - s|` over the remaining samples.
    pub min_resolved_difference: f64,
    /// Maximum of `|h|` on small circles around the poles.
    pub max_h_near_poles: f64,
    /// Removability residual of `q - e^(g1)` at the poles.
    pub removability_residual: f64,
    /// Worst relative deviation of `h - s` from `-e^(g1)/q1` where `|q1| > 0.1`.
    pub difference_identity_error: f64,
    /// Finite values, removable numerator and `min_difference > 0` at every
    /// sample.
    pub pass: bool,
    /// As `pass`, with positivity judged on resolved samples only.
    pub resolved_pass: bool,
}

/// Removability residual of `q - e^(g1)` recomputed from `g1` alone.
pub fn removability_residual<T: Real>(s: &RationalFn<T>, g1: &Poly<T>) -> Result<T> {
    if s.den().is_constant() {
        return Ok(T::zero());
    }
    let q = EntireExpr::poly(s.num().clone());
    let e_g1 = EntireExpr::exp(EntireExpr::poly(g1.clone()));
    let numer = EntireExpr::sum(vec![q.clone(), EntireExpr::neg(e_g1.clone())]);
    let mut worst = T::zero();
    for r in s.poles()? {
        let m = r.multiplicity;
        let jet = numer.jet(r.value, m + JET_EXTRA);
        let scale = q.jet_magnitude(r.value, m + JET_EXTRA).max(e_g1.jet_magnitude(r.value, m + JET_EXTRA));
        let low = jet[..m].iter().fold(T::zero(), |a, c| a.max(c.norm()));
        if scale > T::zero() {
            worst = worst.max(low / scale);
        }
    }
    Ok(worst)
}

pub fn verify_gap<T: Real>(cert: &GapCertificate<T>, n_samples: usize, seed: u64) -> Result<GapReport> {
    verify_gap_in(cert, &SampleSpec::new(n_samples, seed))
}

pub fn verify_gap_in<T: Real>(cert: &GapCertificate<T>, spec: &SampleSpec<T>) -> Result<GapReport> {
    let s = &cert.s;
    let residual = removability_residual(s, &cert.g1)?;
    let pts = sampling::points(spec, |z| !s.is_pole(z));
    let mut min_diff = T::infinity();
    let mut min_resolved = T::infinity();
    let mut unresolved = 0;
    let mut overflow = false;
    let mut ident = T::zero();
    let mut finite = true;
    for &z in &pts {
        let sv = s.eval_raw(z);
        let q1z = s.den().eval(z);
        let re_g1 = cert.g1.eval(z).re;
        let log_gap = re_g1 - q1z.norm().ln();
        // complex division forms e^(g1) conj(q1) before scaling down
        let peak = re_g1 + q1z.norm().ln().max(T::zero());
        if peak.max(log_gap) > T::max_value().ln() - T::lit(4.0) {
            // h lies beyond the floating range
            unresolved += 1;
            overflow = true;
            continue;
        }
        let hv = cert.h.eval(z);
        let d = (hv - sv).norm();
        finite &= d.is_finite();
        min_diff = min_diff.min(d);
        if log_gap.exp() > T::lit(SUBTRACTION_RESOLUTION) * hv.norm().max(sv.norm()) {
            min_resolved = min_resolved.min(d);
        } else {
            unresolved += 1;
        }
        if q1z.norm() > T::lit(0.1) {
            let want = -cert.g1.eval(z).exp() / q1z;
            ident = ident.max((hv - sv - want).norm() / want.norm().max(T::one()));
        }
    }
    let mut max_h = T::zero();
    for pd in &cert.pole_data {
        for k in 0..16 {
            let theta = T::TAU() * T::from_usize_lossy(k) / T::lit(16.0);
            let z = pd.pole + Complex::from_polar(T::lit(POLE_CIRCLE_RADIUS), theta);
            let hv = cert.h.eval(z).norm();
            finite &= hv.is_finite();
            max_h = max_h.max(hv);
        }
    }
    let f = |x: T| x.to_f64().unwrap_or(f64::NAN);
    let sound = finite && residual < T::lit(EPS_JET);
    Ok(GapReport {
        samples: pts.len(),
        min_difference: f(min_diff),
        unresolved,
        min_resolved_difference: f(min_resolved),
        max_h_near_poles: f(max_h),
        removability_residual: f(residual),
        difference_identity_error: f(ident),
        pass: sound && !overflow && min_diff > T::zero(),
        resolved_pass: sound && min_resolved > T::zero(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, PI};

    fn cx(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    type P = Poly<f64>;

    fn rat(num: &[f64], den: &[f64]) -> RationalFn<f64> {
        RationalFn::new(P::from_reals(num), P::from_reals(den)).unwrap()
    }

    #[test]
    fn hermite_examples() {
        assert!(hermite_interpolate(&[(cx(0.0, 0.0), vec![cx(0.0, 0.0)])]).unwrap().is_zero());
        let p = hermite_interpolate(&[
            (cx(1.0, 0.0), vec![cx(0.0, 0.0)]),
            (cx(-1.0, 0.0), vec![cx(0.0, PI)]),
        ])
        .unwrap();
        assert!((p.coeff(0) - cx(0.0, PI / 2.0)).norm() < 1e-15);
        assert!((p.coeff(1) - cx(0.0, -PI / 2.0)).norm() < 1e-15);
        let p = hermite_interpolate(&[(cx(0.0, 0.0), vec![cx(0.0, 0.0), cx(0.0, 0.0)])]).unwrap();
        assert!(p.is_zero());
        assert!(hermite_interpolate(&[
            (cx(1.0, 0.0), vec![cx(0.0, 0.0)]),
            (cx(1.0, 0.0), vec![cx(1.0, 0.0)])
        ])
        .is_err());
    }

    #[test]
    fn hermite_matches_confluent_jets() {
        let nodes = vec![
            (cx(0.5, 0.1), vec![cx(1.0, 0.0), cx(-2.0, 1.0), cx(0.3, 0.0)]),
            (cx(-0.4, 0.7), vec![cx(0.0, 1.0), cx(0.5, 0.5)]),
        ];
        let p = hermite_interpolate(&nodes).unwrap();
        assert!(p.degree().unwrap() < 5);
        for (z, jet) in &nodes {
            let got = p.jet(*z, jet.len() - 1);
            for (a, b) in got.iter().zip(jet) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn gap_for_one_over_z() {
        let cert = construct_gap(&rat(&[1.0], &[0.0, 1.0])).unwrap();
        assert!(cert.g1.is_zero());
        assert!(cert.h.eval(cx(0.3, 0.2)).norm() < 1e-15);
        let rep = verify_gap(&cert, 100, 1).unwrap();
        assert!(rep.pass);
    }

    #[test]
    fn gap_for_two_poles() {
        let cert = construct_gap(&rat(&[0.0, 1.0], &[-1.0, 0.0, 1.0])).unwrap();
        assert!((cert.g1.coeff(0) - cx(0.0, PI / 2.0)).norm() < 1e-12);
        assert!((cert.g1.coeff(1) - cx(0.0, -PI / 2.0)).norm() < 1e-12);
        let rep = verify_gap(&cert, 200, 3).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert!(rep.difference_identity_error < 1e-9);
    }

    #[test]
    fn gap_without_poles() {
        let cert = construct_gap(&rat(&[0.0, 0.0, 1.0], &[1.0])).unwrap();
        assert_eq!(cert.h.as_poly().unwrap(), P::from_reals(&[-1.0, 0.0, 1.0]));
        let rep = verify_gap(&cert, 100, 2).unwrap();
        assert!(rep.pass && (rep.min_difference - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tampered_certificate_fails() {
        let mut cert = construct_gap(&rat(&[0.0, 1.0], &[-1.0, 0.0, 1.0])).unwrap();
        cert.g1 = &cert.g1 + &P::from_reals(&[1e-3]);
        let rep = verify_gap(&cert, 50, 4).unwrap();
        assert!(!rep.pass && rep.removability_residual > EPS_JET);
    }

    #[test]
    fn psi_examples() {
        let w = cx(3.0, 4.0);
        assert_eq!(psi(cx(0.0, 0.0), w), w);
        assert!((psi(cx(1.0, 0.0), cx(1.0, 0.0)) - cx(E - 1.0, 0.0)).norm() < 1e-15);
        assert!((psi(cx(1e-9, 0.0), cx(2.0, 0.0)) - cx(2.0 + 2e-9, 0.0)).norm() < 1e-12);
    }
}
