//! Riccati fields `W^u = e^u (a w^2 + b w + c) d/dw` on `C x P^1`, their
//! closed-form flows, and the maps `g^u(z, t) = psi^u(t, z, sigma(z))`.
//!
//! Points of a fiber are handled in homogeneous coordinates `[W : V]`, so the
//! point at infinity needs no special casing in the flow formulas.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::complex_poly::{poly_roots, Poly, RationalFn, SpherePoint, EPS_POLE};
use crate::entire_expr::EntireExpr;
use crate::error::{Error, Result};
use crate::flow_oracle::{integrate, IntegrationSpec};
use crate::gap_constructor::GapCertificate;
use crate::sampling::{self, SampleSpec};
use crate::scalar::{cone, czero, fmt_cx, to_f64, Real};

/// Relative size of the discriminant below which a fiber has a double root.
pub const DOUBLE_ROOT_EPS: f64 = 1e-12;
/// Minimal chordal distance from the fiber roots for a section to pass.
pub const SECTION_CLEARANCE: f64 = 1e-12;
/// `|w|` above which the chart `1/w` is used.
pub const CHART_SWITCH: f64 = 2.0;

/// `{a w^2 + b w + c = 0}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct DoubleSection<T: Real> {
    pub a: EntireExpr<T>,
    pub b: EntireExpr<T>,
    pub c: EntireExpr<T>,
}

impl<T: Real> DoubleSection<T> {
    pub fn new(a: EntireExpr<T>, b: EntireExpr<T>, c: EntireExpr<T>) -> Result<Self> {
        if a.is_zero() && b.is_zero() && c.is_zero() {
            return Err(Error::Invalid("double section with all coefficients zero".into()));
        }
        Ok(DoubleSection { a, b, c })
    }

    pub fn from_polys(a: Poly<T>, b: Poly<T>, c: Poly<T>) -> Result<Self> {
        DoubleSection::new(EntireExpr::poly(a), EntireExpr::poly(b), EntireExpr::poly(c))
    }

    /// `b^2 - 4ac`.
    pub fn discriminant(&self) -> EntireExpr<T> {
        EntireExpr::sum(vec![
            EntireExpr::prod(vec![self.b.clone(), self.b.clone()]),
            EntireExpr::prod(vec![
                EntireExpr::constant(Complex::new(T::lit(-4.0), T::zero())),
                self.a.clone(),
                self.c.clone(),
            ]),
        ])
    }

    pub fn coeffs_at(&self, z: Complex<T>) -> [Complex<T>; 3] {
        [self.a.eval(z), self.b.eval(z), self.c.eval(z)]
    }

    pub fn fiber_roots(&self, z: Complex<T>) -> Result<FiberRoots<T>> {
        fiber_roots(self.coeffs_at(z), z)
    }
}

/// The points of a double section over one `z`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real", rename_all = "lowercase")]
pub enum FiberRoots<T: Real> {
    Distinct(SpherePoint<T>, SpherePoint<T>),
    Double(SpherePoint<T>),
}

impl<T: Real> FiberRoots<T> {
    pub fn points(&self) -> Vec<SpherePoint<T>> {
        match *self {
            FiberRoots::Distinct(a, b) => vec![a, b],
            FiberRoots::Double(a) => vec![a],
        }
    }

    pub fn swapped(self) -> Self {
        match self {
            FiberRoots::Distinct(a, b) => FiberRoots::Distinct(b, a),
            d => d,
        }
    }
}

fn fiber_roots<T: Real>([a, b, c]: [Complex<T>; 3], z: Complex<T>) -> Result<FiberRoots<T>> {
    let eps = T::lit(EPS_POLE);
    let scale = a.norm().max(b.norm()).max(c.norm());
    if scale <= eps {
        return Err(Error::DegenerateFiber(fmt_cx(z)));
    }
    if a.norm() <= eps * scale {
        if b.norm() <= eps * scale {
            return Ok(FiberRoots::Double(SpherePoint::Infinity));
        }
        return Ok(FiberRoots::Distinct(SpherePoint::Finite(-c / b), SpherePoint::Infinity));
    }
    let disc = b * b - a * c * T::lit(4.0);
    if disc.norm() <= T::lit(DOUBLE_ROOT_EPS) * (b.norm_sqr() + (a * c).norm() * T::lit(4.0)) {
        return Ok(FiberRoots::Double(SpherePoint::Finite(-b / (a * T::lit(2.0)))));
    }
    let sq = disc.sqrt();
    // pick the sign avoiding cancellation in b + sq
    let sq = if (b + sq).norm() >= (b - sq).norm() { sq } else { -sq };
    let qq = -(b + sq) * T::lit(0.5);
    Ok(FiberRoots::Distinct(SpherePoint::Finite(qq / a), SpherePoint::Finite(c / qq)))
}

type Homog<T> = (Complex<T>, Complex<T>);

fn to_homog<T: Real>(w: SpherePoint<T>) -> Homog<T> {
    match w {
        SpherePoint::Infinity => (cone(), czero()),
        SpherePoint::Finite(x) if x.norm() > T::lit(CHART_SWITCH) => (cone(), x.inv()),
        SpherePoint::Finite(x) => (x, cone()),
    }
}

fn from_homog<T: Real>((w, v): Homog<T>) -> SpherePoint<T> {
    if v.norm().is_zero() {
        SpherePoint::Infinity
    } else {
        SpherePoint::from_value(w / v)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct RiccatiField<T: Real> {
    pub u: EntireExpr<T>,
    pub d: DoubleSection<T>,
}

impl<T: Real> RiccatiField<T> {
    pub fn new(u: EntireExpr<T>, d: DoubleSection<T>) -> Self {
        RiccatiField { u, d }
    }

    /// `e^u (a w^2 + b w + c)` in the chart `w`.
    pub fn eval(&self, z: Complex<T>, w: Complex<T>) -> Complex<T> {
        let [a, b, c] = self.d.coeffs_at(z);
        self.u.eval(z).exp() * ((a * w + b) * w + c)
    }

    /// The same field in the chart `v = 1/w`: `-e^u (a + b v + c v^2)`.
    pub fn eval_inverted(&self, z: Complex<T>, v: Complex<T>) -> Complex<T> {
        let [a, b, c] = self.d.coeffs_at(z);
        -self.u.eval(z).exp() * ((c * v + b) * v + a)
    }

    pub fn flow(&self, t: Complex<T>, z: Complex<T>, w: SpherePoint<T>) -> Result<SpherePoint<T>> {
        self.flow_ordered(t, z, w, false)
    }

    /// As [`RiccatiField::flow`], with the two fiber roots taken in the
    /// opposite order when `swap` is set. The result does not depend on it.
    pub fn flow_ordered(&self, t: Complex<T>, z: Complex<T>, w: SpherePoint<T>, swap: bool) -> Result<SpherePoint<T>> {
        let coeffs = self.d.coeffs_at(z);
        let mut roots = fiber_roots(coeffs, z)?;
        if swap {
            roots = roots.swapped();
        }
        let e = self.u.eval(z).exp();
        let [a, b, c] = coeffs;
        let (ww, vv) = to_homog(w);
        let out = match roots {
            FiberRoots::Distinct(SpherePoint::Finite(w1), SpherePoint::Finite(w2)) => {
                // m = (w - w1)/(w - w2) evolves as m e^(lambda t)
                let lambda = e * a * (w1 - w2);
                let m1 = ww - w1 * vv;
                let m2 = ww - w2 * vv;
                let x = lambda * t;
                if x.re > T::zero() {
                    let inv = (-x).exp();
                    (w1 * m2 * inv - w2 * m1, m2 * inv - m1)
                } else {
                    let ex = x.exp();
                    (w1 * m2 - w2 * m1 * ex, m2 - m1 * ex)
                }
            }
            FiberRoots::Distinct(SpherePoint::Finite(w1), SpherePoint::Infinity)
            | FiberRoots::Distinct(SpherePoint::Infinity, SpherePoint::Finite(w1)) => {
                // linear fiber: w' = e b (w - w1)
                let ex = (e * b * t).exp();
                (w1 * vv + (ww - w1 * vv) * ex, vv)
            }
            FiberRoots::Double(SpherePoint::Finite(w1)) => {
                // 1/(w - w1) decreases linearly at rate e a
                let dd = ww - w1 * vv;
                let den = vv - e * a * t * dd;
                (w1 * den + dd, den)
            }
            FiberRoots::Double(SpherePoint::Infinity) => (ww + e * c * t * vv, vv),
            FiberRoots::Distinct(SpherePoint::Infinity, SpherePoint::Infinity) => {
                unreachable!("two roots at infinity are reported as a double root")
            }
        };
        Ok(from_homog(out))
    }

    /// Multiplier `lambda` of the flow `m -> m e^(lambda t)` on a fiber with
    /// two distinct roots, for the first root ordering. The other ordering
    /// gives `-lambda`.
    pub fn fiber_multiplier(&self, z: Complex<T>) -> Result<Complex<T>> {
        let coeffs = self.d.coeffs_at(z);
        let e = self.u.eval(z).exp();
        match fiber_roots(coeffs, z)? {
            FiberRoots::Distinct(SpherePoint::Finite(w1), SpherePoint::Finite(w2)) => Ok(e * coeffs[0] * (w1 - w2)),
            FiberRoots::Distinct(_, _) => Ok(e * coeffs[1]),
            FiberRoots::Double(_) => Err(Error::Parabolic(fmt_cx(z))),
        }
    }

    /// Integrates the fiber ODE with the numerical oracle, switching to the
    /// chart `1/w` whenever `|w| > 2`. The segment from 0 to `t` is cut into
    /// `pieces` parts and the chart is chosen afresh for each.
    pub fn oracle_flow(&self, t: Complex<T>, z: Complex<T>, w: SpherePoint<T>, pieces: usize) -> Result<SpherePoint<T>> {
        let n = pieces.max(1);
        let dt = t / T::from_usize_lossy(n);
        let mut cur = w;
        for _ in 0..n {
            let spec = IntegrationSpec::to(dt);
            cur = match cur {
                SpherePoint::Finite(x) if x.norm() <= T::lit(CHART_SWITCH) => {
                    let end = integrate(|_, w| (czero(), self.eval(z, w)), (z, x), &spec)?.end.1;
                    SpherePoint::Finite(end)
                }
                other => {
                    let v0 = other.recip().finite().expect("1/w is finite when |w| > 2");
                    let end = integrate(|_, v| (czero(), self.eval_inverted(z, v)), (z, v0), &spec)?.end.1;
                    SpherePoint::Finite(end).recip()
                }
            };
        }
        Ok(cur)
    }
}

/// A section `z -> sigma(z)` of `C x P^1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real", rename_all = "lowercase")]
pub enum Section<T: Real> {
    Infinity,
    Rational(RationalFn<T>),
}

impl<T: Real> Section<T> {
    pub fn eval(&self, z: Complex<T>) -> SpherePoint<T> {
        match self {
            Section::Infinity => SpherePoint::Infinity,
            Section::Rational(s) => s.eval(z),
        }
    }

    /// `(p, r)` with `sigma = [p : r]`.
    fn homogeneous(&self) -> (Poly<T>, Poly<T>) {
        match self {
            Section::Infinity => (Poly::one(), Poly::zero()),
            Section::Rational(s) => (s.num().clone(), s.den().clone()),
        }
    }
}

/// Proposes `sigma = infinity` when `a` is a nonzero constant, so that no
/// fiber has a root at infinity.
pub fn auto_section<T: Real>(d: &DoubleSection<T>) -> Option<Section<T>> {
    match d.a.as_poly() {
        Some(p) if p.degree() == Some(0) => Some(Section::Infinity),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectionReport {
    pub samples: usize,
    /// Smallest chordal distance between `sigma(z)` and a fiber root.
    pub min_distance: f64,
    pub worst_z: [f64; 2],
    pub pass: bool,
}

/// Samples `sigma` against the fiber roots of `d`.
///
/// Besides the random points (and the region center), the zeros of
/// `a p^2 + b p r + c r^2` inside the region are checked when the section and
/// the coefficients are polynomial data, since those are exactly the `z` where
/// the graph of `sigma = [p : r]` meets `d`.
pub fn verify_section_avoids<T: Real>(sigma: &Section<T>, d: &DoubleSection<T>, spec: &SampleSpec<T>) -> SectionReport {
    let mut pts = vec![spec.region.center];
    pts.extend(sampling::points(spec, |_| true));
    if let (Some(a), Some(b), Some(c)) = (d.a.as_poly(), d.b.as_poly(), d.c.as_poly()) {
        let (p, r) = sigma.homogeneous();
        let touch = &(&(&a * &(&p * &p)) + &(&b * &(&p * &r))) + &(&c * &(&r * &r));
        if touch.is_zero() {
            // sigma lies inside d everywhere
            pts.push(spec.region.center);
        } else if let Ok(roots) = poly_roots(&touch) {
            pts.extend(roots.into_iter().map(|r| r.value).filter(|z| spec.region.contains(*z)));
        }
    }
    let mut min = T::infinity();
    let mut worst = spec.region.center;
    for &z in &pts {
        let sv = sigma.eval(z);
        let dist = match d.fiber_roots(z) {
            Ok(roots) => roots.points().iter().fold(T::infinity(), |m, r| m.min(sv.chordal(r))),
            Err(_) => T::zero(),
        };
        if dist < min {
            min = dist;
            worst = z;
        }
    }
    SectionReport {
        samples: pts.len(),
        min_distance: to_f64(min),
        worst_z: [to_f64(worst.re), to_f64(worst.im)],
        pass: min > T::lit(SECTION_CLEARANCE),
    }
}

/// `g^u(z, t) = psi^u(t, z, sigma(z))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct DominatingMapG<T: Real> {
    pub field: RiccatiField<T>,
    pub sigma: Section<T>,
}

impl<T: Real> DominatingMapG<T> {
    /// Checks the section against the double section before building the map.
    pub fn new(field: RiccatiField<T>, sigma: Section<T>, spec: &SampleSpec<T>) -> Result<Self> {
        let rep = verify_section_avoids(&sigma, &field.d, spec);
        if !rep.pass {
            return Err(Error::Domain(format!(
                "section meets the double section near z = {}{:+}i (chordal distance {:e})",
                rep.worst_z[0], rep.worst_z[1], rep.min_distance
            )));
        }
        Ok(DominatingMapG { field, sigma })
    }

    pub fn eval(&self, z: Complex<T>, t: Complex<T>) -> Result<SpherePoint<T>> {
        self.field.flow(t, z, self.sigma.eval(z))
    }
}

/// The field `q1^(w - h)(w - s^)` for a gap certificate and a second
/// function `s^ = q^/q1^`, with `u = 0`.
///
/// The disjointness of `graph(s^)` from `graph(h)` and `graph(s)` is checked
/// at the sample points.
pub fn prop3_construct<T: Real>(
    cert: &GapCertificate<T>,
    s_hat: &RationalFn<T>,
    spec: &SampleSpec<T>,
) -> Result<RiccatiField<T>> {
    let q = s_hat.num();
    let q1 = s_hat.den();
    for z in sampling::points(spec, |z| !cert.s.is_pole(z) && !s_hat.is_pole(z)) {
        let sh = s_hat.eval_raw(z);
        let clash_h = (sh - cert.h.eval(z)).norm();
        let clash_s = (sh - cert.s.eval_raw(z)).norm();
        if clash_h.is_zero() || clash_s.is_zero() {
            return Err(Error::Domain(format!("graph(s^) meets graph(h) or graph(s) at z = {}", fmt_cx(z))));
        }
    }
    let h = cert.h.clone();
    let a = EntireExpr::poly(q1.clone());
    let b = EntireExpr::neg(EntireExpr::sum(vec![
        EntireExpr::prod(vec![EntireExpr::poly(q1.clone()), h.clone()]),
        EntireExpr::poly(q.clone()),
    ]));
    let c = EntireExpr::prod(vec![EntireExpr::poly(q.clone()), h]);
    Ok(RiccatiField::new(EntireExpr::zero(), DoubleSection::new(a, b, c)?))
}

/// The `z` where `graph(s^)` meets `graph(s)`: common zeros of
/// `q^ q1 - q q1^` off the common poles.
pub fn prop3_touching_points<T: Real>(s: &RationalFn<T>, s_hat: &RationalFn<T>) -> Result<Vec<Complex<T>>> {
    let diff = &(s_hat.num() * s.den()) - &(s.num() * s_hat.den());
    if diff.is_constant() {
        return Ok(Vec::new());
    }
    Ok(poly_roots(&diff)?
        .into_iter()
        .map(|r| r.value)
        .filter(|&z| !(s.is_pole(z) && s_hat.is_pole(z)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gap_constructor::construct_gap;
    use crate::sampling::Region;

    fn cx(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    type P = Poly<f64>;

    fn w2_minus_z() -> DoubleSection<f64> {
        DoubleSection::from_polys(P::one(), P::zero(), P::from_reals(&[0.0, -1.0])).unwrap()
    }

    fn fin(w: SpherePoint<f64>) -> Complex<f64> {
        w.finite().expect("finite point")
    }

    #[test]
    fn fiber_root_examples() {
        let d = w2_minus_z();
        match d.fiber_roots(cx(4.0, 0.0)).unwrap() {
            FiberRoots::Distinct(a, b) => {
                let mut v = [fin(a).re, fin(b).re];
                v.sort_by(|x, y| x.partial_cmp(y).unwrap());
                assert!((v[0] + 2.0).abs() < 1e-15 && (v[1] - 2.0).abs() < 1e-15);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(d.fiber_roots(cx(0.0, 0.0)).unwrap(), FiberRoots::Double(SpherePoint::Finite(cx(0.0, 0.0))));
        let lin = DoubleSection::from_polys(P::zero(), P::one(), P::from_reals(&[-1.0])).unwrap();
        assert_eq!(
            lin.fiber_roots(cx(0.3, 0.0)).unwrap(),
            FiberRoots::Distinct(SpherePoint::Finite(cx(1.0, 0.0)), SpherePoint::Infinity)
        );
        let deg = DoubleSection::from_polys(P::identity(), P::identity(), P::zero()).unwrap();
        assert!(matches!(deg.fiber_roots(cx(0.0, 0.0)), Err(Error::DegenerateFiber(_))));
    }

    #[test]
    fn flow_examples() {
        let sq = RiccatiField::new(
            EntireExpr::zero(),
            DoubleSection::from_polys(P::one(), P::zero(), P::zero()).unwrap(),
        );
        let t = cx(0.7, 0.2);
        let w = fin(sq.flow(t, cx(5.0, 0.0), SpherePoint::Infinity).unwrap());
        assert!((w + t.inv()).norm() < 1e-15);

        let f = RiccatiField::new(EntireExpr::zero(), w2_minus_z());
        for t in [cx(0.4, 0.0), cx(-0.3, 0.5), cx(1.2, -0.7)] {
            let w = fin(f.flow(t, cx(1.0, 0.0), SpherePoint::Infinity).unwrap());
            let e2 = (t * 2.0).exp();
            let want = (cx(1.0, 0.0) + e2) / (cx(1.0, 0.0) - e2);
            assert!((w - want).norm() < 1e-13 * want.norm().max(1.0));
        }
        assert_eq!(f.flow(cx(0.0, 0.0), cx(1.0, 0.0), SpherePoint::Infinity).unwrap(), SpherePoint::Infinity);
    }

    #[test]
    fn oracle_matches_closed_form_across_charts() {
        let f = RiccatiField::new(EntireExpr::poly(P::from_reals(&[0.1])), w2_minus_z());
        let z = cx(1.3, -0.4);
        let t = cx(0.9, 0.6);
        for w in [SpherePoint::Infinity, SpherePoint::Finite(cx(0.2, 0.1)), SpherePoint::Finite(cx(5.0, -3.0))] {
            let a = f.flow(t, z, w).unwrap();
            let b = f.oracle_flow(t, z, w, 32).unwrap();
            assert!(a.chordal(&b) < 1e-8, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn relabeling_is_invisible() {
        let f = RiccatiField::new(EntireExpr::zero(), w2_minus_z());
        let z = cx(0.6, 0.9);
        let w = SpherePoint::Finite(cx(-0.4, 1.7));
        let t = cx(0.3, -1.1);
        let a = f.flow_ordered(t, z, w, false).unwrap();
        let b = f.flow_ordered(t, z, w, true).unwrap();
        assert!(a.chordal(&b) < 1e-14);
    }

    #[test]
    fn multiplier_examples() {
        let f = RiccatiField::new(EntireExpr::zero(), w2_minus_z());
        assert!((f.fiber_multiplier(cx(1.0, 0.0)).unwrap().norm() - 2.0).abs() < 1e-15);
        assert!(matches!(f.fiber_multiplier(cx(0.0, 0.0)), Err(Error::Parabolic(_))));
        let g = RiccatiField::new(
            EntireExpr::zero(),
            DoubleSection::from_polys(P::one(), P::zero(), P::one()).unwrap(),
        );
        let m = g.fiber_multiplier(cx(0.3, 0.0)).unwrap();
        assert!((m.norm() - 2.0).abs() < 1e-15 && m.re.abs() < 1e-15);
    }

    #[test]
    fn section_checks() {
        let d = w2_minus_z();
        let spec = SampleSpec::new(200, 5);
        assert_eq!(auto_section(&d), Some(Section::Infinity));
        assert!(verify_section_avoids(&Section::Infinity, &d, &spec).pass);
        let zero = Section::Rational(RationalFn::constant(cx(0.0, 0.0)));
        assert!(!verify_section_avoids(&zero, &d, &spec).pass);
        let two = Section::Rational(RationalFn::constant(cx(2.0, 0.0)));
        let unit = SampleSpec { region: Region::disk(cx(0.0, 0.0), 1.0), ..spec };
        assert!(verify_section_avoids(&two, &d, &unit).pass);
    }

    #[test]
    fn prop3_example() {
        let s = RationalFn::new(P::one(), P::identity()).unwrap();
        let cert = construct_gap(&s).unwrap();
        let s_hat = RationalFn::constant(cx(1.0, 0.0));
        let f = prop3_construct(&cert, &s_hat, &SampleSpec::new(100, 2)).unwrap();
        let roots = f.d.fiber_roots(cx(0.5, 0.5)).unwrap();
        let pts: Vec<_> = roots.points().iter().map(|p| fin(*p)).collect();
        assert!(pts.iter().any(|p| p.norm() < 1e-15) && pts.iter().any(|p| (p - cx(1.0, 0.0)).norm() < 1e-15));
        assert!((f.fiber_multiplier(cx(0.5, 0.5)).unwrap().norm() - 1.0).abs() < 1e-15);
        // this s^ does meet graph(1/z), at z = 1
        let touch = prop3_touching_points(&s, &s_hat).unwrap();
        assert_eq!(touch.len(), 1);
        assert!((touch[0] - cx(1.0, 0.0)).norm() < 1e-15);
    }
}
