//! Catalogs of complete polynomial vector fields on the plane, fiber
//! automorphisms `(z, w) -> (z, e^gamma w + delta)`, tangency and eigenvalue
//! checks, and closed-form flows.

mod bipoly;
mod eigen;
mod family;
mod flows;
mod plane_field;

pub use bipoly::LaurentBiPoly;
pub use eigen::{
    classify_ratio, eigenratio, rational_reconstruct, same_ratio, EigenClass, EigenReport, MAX_DENOMINATOR,
    RATIONAL_TOL, ZERO_TOL,
};
pub use family::{alpha_conjugate, gcd, holomorphic_part, instantiate_family, FamilySpec, COEFF_TOL};
pub use flows::{
    closed_flow_family, completeness_evidence, first_integral_drift, group_law_residual, oracle_flow,
    CompletenessReport,
};
pub use plane_field::{pushforward, FiberAutomorphism, PlaneField};

use num_complex::Complex;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::complex_poly::RationalFn;
use crate::entire_expr::EntireExpr;
use crate::error::{Error, Result};
use crate::gap_constructor::GapCertificate;
use crate::sampling::{self, Region, SampleSpec};
use crate::scalar::{cone, czero, fmt_cx, to_f64, Real};

/// Relative tolerance of [`tangency_check`].
pub const TANGENCY_TOL: f64 = 1e-9;

/// Plane curves given by a defining function `F`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "curve", rename_all = "snake_case", bound = "T: Real")]
pub enum Curve<T: Real> {
    /// `q1(z) w - q(z) = 0` for `s = q/q1`.
    Graph { s: RationalFn<T> },
    /// `w z^k - 1 = 0`.
    InverseMonomial { k: u32 },
    /// `w^r - a z^s = 0`.
    Cusp { r: u32, s: u32, a: Complex<T> },
    /// `phi(base)`, with defining function `F o phi^-1`.
    Mapped { phi: FiberAutomorphism<T>, base: Box<Curve<T>> },
}

type Pt<T> = (Complex<T>, Complex<T>);

impl<T: Real> Curve<T> {
    /// `F(p)` and its gradient.
    pub fn defining(&self, p: Pt<T>) -> (Complex<T>, [Complex<T>; 2]) {
        let (z, w) = p;
        match self {
            Curve::Graph { s } => {
                let (q, q1) = (s.num(), s.den());
                let f = q1.eval(z) * w - q.eval(z);
                (f, [q1.derivative().eval(z) * w - q.derivative().eval(z), q1.eval(z)])
            }
            Curve::InverseMonomial { k } => {
                let zk = z.powu(*k);
                let dz = if *k == 0 { czero() } else { z.powu(k - 1) * w * T::lit(*k as f64) };
                (w * zk - cone(), [dz, zk])
            }
            Curve::Cusp { r, s, a } => {
                let f = w.powu(*r) - *a * z.powu(*s);
                let dz = -*a * z.powu(s - 1) * T::lit(*s as f64);
                let dw = w.powu(r - 1) * T::lit(*r as f64);
                (f, [dz, dw])
            }
            Curve::Mapped { phi, base } => {
                let inv = phi.inverse();
                let p0 = inv.apply(z, w);
                let (f, g) = base.defining(p0);
                let j = inv.jacobian(z, w);
                (f, [g[0] * j[0][0] + g[1] * j[1][0], g[0] * j[0][1] + g[1] * j[1][1]])
            }
        }
    }

    /// A point of the curve over a random abscissa, or `None` if the draw
    /// is unusable (near a pole or the singular fiber).
    fn sample<R: Rng>(&self, rng: &mut R, region: &Region<T>) -> Option<Pt<T>> {
        let z = sampling::point_in(rng, region);
        match self {
            Curve::Graph { s } => {
                if s.den().eval_abs(z) <= T::lit(1e-6) * s.den().norm() {
                    return None;
                }
                Some((z, s.eval_raw(z)))
            }
            Curve::InverseMonomial { k } => {
                if z.norm() < T::lit(0.2) {
                    return None;
                }
                Some((z, z.powi(-(*k as i32))))
            }
            Curve::Cusp { r, s, a } => {
                let v = *a * z.powu(*s);
                let branch = rng.gen_range(0..*r);
                let root = Complex::from_polar(T::one(), T::lit(std::f64::consts::TAU * branch as f64 / *r as f64));
                Some((z, v.powf(T::one() / T::lit(*r as f64)) * root))
            }
            Curve::Mapped { phi, base } => {
                let (z0, w0) = base.sample(rng, region)?;
                Some(phi.apply(z0, w0))
            }
        }
    }

    /// `count` seeded points of the curve.
    pub fn samples(&self, spec: &SampleSpec<T>) -> Vec<Pt<T>> {
        let mut rng = sampling::rng(spec.seed);
        let mut out = Vec::with_capacity(spec.count);
        let mut tries = 0;
        while out.len() < spec.count && tries < 100 * spec.count.max(1) {
            tries += 1;
            if let Some(p) = self.sample(&mut rng, &spec.region) {
                if crate::scalar::is_finite(p.1) {
                    out.push(p);
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TangencyReport {
    pub samples: usize,
    pub max_residual: f64,
    /// Largest `|grad F| |X|`, floored at 1.
    pub scale: f64,
    /// Largest `|F|` at the samples.
    pub max_defect: f64,
    pub pass: bool,
}

/// Largest `|dF(X)|` over curve samples.
pub fn tangency_check<T: Real>(x: &PlaneField<T>, curve: &Curve<T>, spec: &SampleSpec<T>) -> TangencyReport {
    let pts = curve.samples(spec);
    let mut worst = T::zero();
    let mut scale = T::one();
    let mut defect = T::zero();
    for &p in &pts {
        let (f, g) = curve.defining(p);
        let (a, b) = x.eval(p.0, p.1);
        worst = worst.max((g[0] * a + g[1] * b).norm());
        let gn = (g[0].norm_sqr() + g[1].norm_sqr()).sqrt();
        let xn = (a.norm_sqr() + b.norm_sqr()).sqrt();
        scale = scale.max(gn * xn);
        defect = defect.max(f.norm());
    }
    let worst = to_f64(worst);
    let scale = to_f64(scale);
    TangencyReport {
        samples: pts.len(),
        max_residual: worst,
        scale,
        max_defect: to_f64(defect),
        pass: !pts.is_empty() && worst.is_finite() && worst < TANGENCY_TOL * scale,
    }
}

/// Smallest `|X|` over curve samples.
pub fn min_norm_on_curve<T: Real>(x: &PlaneField<T>, curve: &Curve<T>, spec: &SampleSpec<T>) -> T {
    curve.samples(spec).into_iter().fold(T::infinity(), |m, (z, w)| {
        let (a, b) = x.eval(z, w);
        m.min((a.norm_sqr() + b.norm_sqr()).sqrt())
    })
}

/// `(z, w) -> (z, e^(-g1) (w - h))`, which carries `graph(s)` onto
/// `graph(1/(z - z0)^k)` when `s` has a single pole `z0` of order `k`.
pub fn lbl_automorphism<T: Real>(cert: &GapCertificate<T>, k: u32) -> Result<FiberAutomorphism<T>> {
    let poles = cert.s.poles()?;
    match poles.as_slice() {
        [p] if p.multiplicity == k as usize => {}
        [p] => {
            return Err(Error::Domain(format!(
                "pole at {} has order {}, not {k}",
                fmt_cx(p.value),
                p.multiplicity
            )))
        }
        _ => {
            return Err(Error::Domain(format!(
                "s has {} distinct poles; exactly one is required",
                poles.len()
            )))
        }
    }
    let neg_g1 = EntireExpr::neg(EntireExpr::poly(cert.g1.clone()));
    let delta = EntireExpr::neg(EntireExpr::prod(vec![EntireExpr::exp(neg_g1.clone()), cert.h.clone()]));
    Ok(FiberAutomorphism::new(neg_g1, delta))
}
