//! Seeded acceptance suites. Each suite returns one [`CriterionReport`];
//! reports carry no timings, so identical seeds give identical output.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::complex_poly::{Poly, RationalFn, SpherePoint};
use crate::covering_domination::{identity_check, CuspCurve};
use crate::double_section_flows::{DominatingMapG, DoubleSection, RiccatiField, Section};
use crate::entire_expr::EntireExpr;
use crate::error::{Error, Result};
use crate::flow_oracle::{integrate, integrate_fixed, monodromy_check, IntegrationSpec};
use crate::gap_constructor::{construct_gap, verify_gap, GapCertificate};
use crate::graph_complement_flows::{DominatingMapF, FiberType, VerticalFieldZu};
use crate::sampling::{self, Region, SampleSpec};
use crate::tangent_catalog::{
    alpha_conjugate, eigenratio, first_integral_drift, gcd, instantiate_family, lbl_automorphism, min_norm_on_curve,
    pushforward, tangency_check, Curve, FamilySpec,
};

type C = Complex<f64>;

fn c(re: f64, im: f64) -> C {
    Complex::new(re, im)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: String,
    pub pass: bool,
    pub detail: String,
    pub metrics: BTreeMap<String, f64>,
}

impl CriterionReport {
    fn new(id: u8, name: &str) -> Self {
        CriterionReport { id, name: name.into(), pass: true, detail: String::new(), metrics: BTreeMap::new() }
    }

    fn metric(&mut self, key: &str, v: f64) {
        self.metrics.insert(key.into(), v);
    }

    /// Records a sub-check; the criterion passes only if every sub-check does.
    fn check(&mut self, ok: bool, what: &str) {
        if !ok {
            self.pass = false;
            if !self.detail.is_empty() {
                self.detail.push_str("; ");
            }
            self.detail.push_str(what);
        }
    }

    fn finish(mut self) -> Self {
        if self.pass && self.detail.is_empty() {
            self.detail = "ok".into();
        }
        self
    }

    /// One line, `PASS`/`FAIL` first.
    pub fn line(&self) -> String {
        let status = if self.pass { "PASS" } else { "FAIL" };
        let m: Vec<String> = self.metrics.iter().map(|(k, v)| format!("{k}={v:.3e}")).collect();
        format!("{status} criterion {:>2} {}: {} [{}]", self.id, self.name, self.detail, m.join(", "))
    }
}

/// Shape of a random rational function.
#[derive(Clone, Copy, Debug)]
pub struct RandomRational {
    pub max_deg: usize,
    pub max_poles: usize,
    pub max_order: usize,
    /// Poles are drawn from the disk of this radius.
    pub pole_radius: f64,
}

impl Default for RandomRational {
    fn default() -> Self {
        RandomRational { max_deg: 6, max_poles: 4, max_order: 3, pole_radius: 2.0 }
    }
}

/// A random `q/q1` in lowest terms: poles at least 0.3 apart, numerator
/// bounded away from zero at every pole.
pub fn random_rational<R: Rng>(rng: &mut R, shape: &RandomRational) -> RationalFn<f64> {
    let disk = Region::disk(c(0.0, 0.0), shape.pole_radius);
    loop {
        let n_poles = rng.gen_range(1..=shape.max_poles.max(1));
        let mut poles: Vec<(C, usize)> = Vec::new();
        let mut total = 0;
        for _ in 0..n_poles {
            let p = sampling::point_in(rng, &disk);
            let order = rng.gen_range(1..=shape.max_order.max(1));
            if total + order > shape.max_deg || poles.iter().any(|(q, _)| (q - p).norm() < 0.3) {
                continue;
            }
            total += order;
            poles.push((p, order));
        }
        if poles.is_empty() {
            continue;
        }
        let roots: Vec<C> = poles.iter().flat_map(|&(p, k)| std::iter::repeat_n(p, k)).collect();
        let den = Poly::from_roots(&roots);
        let deg = rng.gen_range(0..=shape.max_deg);
        let num = Poly::new((0..=deg).map(|_| square(rng, 1.0)).collect());
        let size: f64 = num.coeffs().iter().map(|a| a.norm()).sum();
        if poles.iter().any(|&(p, _)| num.eval(p).norm() < 0.05 * size) {
            continue;
        }
        if let Ok(s) = RationalFn::new(num, den) {
            return s;
        }
    }
}

fn random_poly<R: Rng>(rng: &mut R, max_deg: usize, size: f64) -> Poly<f64> {
    let deg = rng.gen_range(0..=max_deg);
    Poly::new((0..=deg).map(|_| square(rng, size)).collect())
}

fn disk_point<R: Rng>(rng: &mut R, radius: f64) -> C {
    sampling::point_in(rng, &Region::disk(c(0.0, 0.0), radius))
}

fn square<R: Rng>(rng: &mut R, h: f64) -> C {
    sampling::point_in_square(rng, h)
}

fn rel(a: C, b: C) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

fn pole_values(s: &RationalFn<f64>) -> Vec<C> {
    s.poles().map(|v| v.into_iter().map(|r| r.value).collect()).unwrap_or_default()
}

/// Gap construction on random data and on two worked examples.
pub fn crit1(seed: u64) -> CriterionReport {
    let mut rep = CriterionReport::new(1, "gap construction");
    let mut rng = sampling::rng(seed);
    let (mut worst_res, mut min_resolved, mut failures) = (0f64, f64::INFINITY, 0usize);
    let (mut unresolved_instances, mut unresolved_samples) = (0usize, 0usize);
    for i in 0..100 {
        let s = random_rational(&mut rng, &RandomRational::default());
        match construct_gap(&s).and_then(|cert| verify_gap(&cert, 1000, seed.wrapping_add(i))) {
            Ok(r) => {
                worst_res = worst_res.max(r.removability_residual);
                min_resolved = min_resolved.min(r.min_resolved_difference);
                if !(r.resolved_pass && r.removability_residual < 1e-8) {
                    failures += 1;
                }
                if !r.pass {
                    unresolved_instances += 1;
                    unresolved_samples += r.unresolved;
                }
            }
            Err(_) => failures += 1,
        }
    }
    rep.metric("max_removability_residual", worst_res);
    rep.metric("min_resolved_h_minus_s", min_resolved);
    rep.metric("instances_failing_resolved_checks", failures as f64);
    rep.metric("instances_failing_literal_check", unresolved_instances as f64);
    rep.metric("samples_below_resolution", unresolved_samples as f64);
    rep.check(failures == 0, &format!("{failures} of 100 random instances failed construction or resolved checks"));
    // the literal check: |h - s| > 0 by subtraction at every sample
    rep.check(
        unresolved_instances == 0,
        &format!(
            "|h - s| is not observable by subtraction somewhere in {unresolved_instances} of 100 instances \
             (exact gap below f64 resolution or h beyond f64 range)"
        ),
    );

    let one_over_z = RationalFn::new(Poly::one(), Poly::identity()).expect("1/z");
    let d1 = construct_gap(&one_over_z).map(|cert| cert.g1.norm()).unwrap_or(f64::INFINITY);
    let hyper = RationalFn::new(Poly::identity(), Poly::from_reals(&[-1.0, 0.0, 1.0])).expect("z/(z^2-1)");
    let want = Poly::new(vec![c(0.0, PI / 2.0), c(0.0, -PI / 2.0)]);
    let d2 = construct_gap(&hyper).map(|cert| (&cert.g1 - &want).norm()).unwrap_or(f64::INFINITY);
    rep.metric("worked_1_over_z", d1);
    rep.metric("worked_z_over_z2_minus_1", d2);
    rep.check(d1 < 1e-10, "g1 for 1/z is not 0");
    rep.check(d2 < 1e-10, "g1 for z/(z^2-1) is not i pi (1-z)/2");
    rep.finish()
}

/// A random vertical field with a start point; every fifth case sits within
/// `1e-6` of a pole so that `|q1(z)| < 1e-3`.
fn random_zu_case<R: Rng>(rng: &mut R, i: usize) -> (VerticalFieldZu<f64>, C, C) {
    let shape = RandomRational { max_deg: 4, max_poles: 3, max_order: 2, pole_radius: 1.5 };
    let s = random_rational(rng, &shape);
    let u = EntireExpr::poly(random_poly(rng, 2, 0.3));
    let z = if i.is_multiple_of(5) {
        let poles = pole_values(&s);
        poles[rng.gen_range(0..poles.len())] + Complex::from_polar(1e-6, rng.gen::<f64>() * 6.0)
    } else {
        disk_point(rng, 1.5)
    };
    let w = disk_point(rng, 2.0);
    (VerticalFieldZu::new(s, u), z, w)
}

fn oracle_w(field: &VerticalFieldZu<f64>, t: C, z: C, w: C) -> Result<C> {
    let spec = IntegrationSpec::to(t).with_tolerances(1e-12, 1e-14);
    Ok(integrate(|z, w| field.eval(z, w), (z, w), &spec)?.end.1)
}

/// Closed-form vertical flows against the oracle.
pub fn crit2(seed: u64) -> CriterionReport {
    let mut rep = CriterionReport::new(2, "flow fidelity");
    let mut rng = sampling::rng(seed);
    let (mut worst, mut near, mut errors) = (0f64, 0usize, 0usize);
    for i in 0..200 {
        let (field, z, w) = random_zu_case(&mut rng, i);
        let t = disk_point(&mut rng, 2.0);
        if field.s.den().eval(z).norm() < 1e-3 {
            near += 1;
        }
        match oracle_w(&field, t, z, w) {
            Ok(b) => worst = worst.max(rel(field.flow(t, z, w).1, b)),
            Err(_) => errors += 1,
        }
    }
    rep.metric("max_rel_error", worst);
    rep.metric("near_zero_cases", near as f64);
    rep.check(worst < 1e-7, "relative error above 1e-7");
    rep.check(near >= 20, "fewer than 20 cases with |q1(z)| < 1e-3");
    rep.check(errors == 0, &format!("oracle failed on {errors} cases"));
    rep.finish()
}

/// Group law of the closed-form flow and the period at a witness.
pub fn crit3(seed: u64) -> CriterionReport {
    let mut rep = CriterionReport::new(3, "group law and period");
    let mut rng = sampling::rng(seed);
    let mut worst = 0f64;
    for i in 0..200 {
        let (field, z, w) = random_zu_case(&mut rng, i);
        let (t1, t2) = (disk_point(&mut rng, 1.0), disk_point(&mut rng, 1.0));
        let a = field.flow(t1 + t2, z, w).1;
        let b = field.flow(t2, z, field.flow(t1, z, w).1).1;
        worst = worst.max(rel(b, a));
    }
    rep.metric("max_group_law_residual", worst);
    rep.check(worst < 1e-9, "group-law residual above 1e-9");

    let s = RationalFn::new(Poly::one(), Poly::identity()).expect("1/z");
    let field = VerticalFieldZu::new(s, EntireExpr::zero());
    let (z, w) = (c(1.0, 0.0), c(0.5, 0.3));
    match field.period(z) {
        Ok(p) => {
            let back = (field.flow(p, z, w).1 - w).norm();
            let half = (field.flow(p / 2.0, z, w).1 - w).norm();
            let mono = monodromy_check(|z, w| field.eval(z, w), (z, w), &[p]);
            let mono_half = monodromy_check(|z, w| field.eval(z, w), (z, w), &[p / 2.0]);
            rep.metric("period_return", back);
            rep.metric("half_period_displacement", half);
            rep.check(back < 1e-8, "period does not return to the start");
            rep.check(half > 0.1, "half period does not move the point");
            match (mono, mono_half) {
                (Ok(m), Ok(mh)) => {
                    rep.metric("oracle_monodromy", m);
                    rep.check(m < 1e-8 && (mh - half).abs() < 1e-7, "monodromy_check disagrees");
                }
                _ => rep.check(false, "monodromy_check failed"),
            }
        }
        Err(e) => rep.check(false, &format!("no period at the witness: {e}")),
    }
    rep.finish()
}

pub fn random_cert<R: Rng>(rng: &mut R) -> GapCertificate<f64> {
    let shape = RandomRational { max_deg: 4, max_poles: 3, max_order: 2, pole_radius: 1.5 };
    loop {
        if let Ok(cert) = construct_gap(&random_rational(rng, &shape)) {
            return cert;
        }
    }
}

/// `z` in the disk of radius 2 with `|q1(z)| > 1e-2 |q1|`.
fn regular_point<R: Rng>(rng: &mut R, s: &RationalFn<f64>) -> C {
    loop {
        let z = disk_point(rng, 2.0);
        if s.den().eval(z).norm() > 1e-2 * s.den().norm() {
            return z;
        }
    }
}

/// The member `u = -g1` against the independent closed form.
pub fn crit4(seed: u64) -> CriterionReport {
    let mut rep = CriterionReport::new(4, "f^(-g1) closed form");
    let mut rng = sampling::rng(seed);
    let mut worst = 0f64;
    for _ in 0..10 {
        let cert = random_cert(&mut rng);
        let f = DominatingMapF::with_u_minus_g1(cert.clone());
        for _ in 0..10 {
            let z = regular_point(&mut rng, &cert.s);
            let t = disk_point(&mut rng, 1.0);
            let (q, q1) = (cert.s.num().eval(z), cert.s.den().eval(z));
            let g = q1 * (-cert.g1.eval(z)).exp();
            let want = q / q1 - (g * t).exp() / g;
            let (z1, w1) = f.eval(z, t);
            // the flow applied to h, straight from the definition
            let w2 = f.field.flow(t, z, cert.h.eval(z)).1;
            worst = worst.max(rel(w1, want)).max(rel(w2, want)).max((z1 - z).norm());
        }
    }
    rep.metric("max_rel_error", worst);
    rep.check(worst < 1e-10, "deviation above 1e-10");
    rep.finish()
}

pub fn random_map<R: Rng>(rng: &mut R) -> DominatingMapF<f64> {
    let cert = random_cert(rng);
    let u = EntireExpr::poly(random_poly(rng, 1, 0.3));
    DominatingMapF::new(cert, u)
}

/// Preimage solve followed by the forward map, on both kinds of fiber.
pub fn crit5(seed: u64) -> CriterionReport {
    let mut rep = CriterionReport::new(5, "surjectivity round trip");
    let mut rng = sampling::rng(seed);
    let (mut worst, mut log_path, mut linear_path, mut errors) = (0f64, 0usize, 0usize, 0usize);
    for _ in 0..5 {
        let f = random_map(&mut rng);
        let poles = pole_values(f.s());
        let mut done = 0;
        while done < 500 {
            let z = if done % 5 == 0 { poles[rng.gen_range(0..poles.len())] } else { disk_point(&mut rng, 2.0) };
            let w = disk_point(&mut rng, 3.0);
            let (q, q1) = (f.s().num().eval(z), f.s().den().eval(z));
            if (q - q1 * w).norm() < 1e-6 * (q.norm() + q1.norm()) {
                continue;
            }
            done += 1;
            match f.field.classify(z) {
                FiberType::TypeC => linear_path += 1,
                FiberType::TypeCStar => log_path += 1,
            }
            match f.preimage(z, w) {
                Ok(t) => {
                    let (z1, w1) = f.eval(z, t);
                    worst = worst.max((z1 - z).norm().hypot((w1 - w).norm()));
                }
                Err(_) => errors += 1,
            }
        }
    }
    rep.metric("max_residual", worst);
    rep.metric("log_branch_targets", log_path as f64);
    rep.metric("linear_targets", linear_path as f64);
    rep.check(worst < 1e-8, "round-trip residual above 1e-8");
    rep.check(errors == 0, &format!("{errors} preimage solves failed"));
    rep.check(log_path > 0 && linear_path > 0, "a solver path was not exercised");
    rep.finish()
}

/// Closed-form Jacobian determinant against central differences in `t`.
pub fn crit6(seed: u64) -> CriterionReport {
    let mut rep = CriterionReport::new(6, "jacobian");
    let mut rng = sampling::rng(seed);
    let (mut worst, mut min_det) = (0f64, f64::INFINITY);
    for _ in 0..10 {
        let f = random_map(&mut rng);
        for _ in 0..10 {
            // finite differences resolve f only where its variation in t is
            // not lost against |s|, and |ct| stays moderate
            let z = loop {
                let z = regular_point(&mut rng, f.s());
                let gap = (f.field.u.eval(z) + f.cert.g1.eval(z)).re.exp();
                if gap >= 1e-4 * f.s().eval_raw(z).norm().max(1.0) {
                    break z;
                }
            };
            let t = disk_point(&mut rng, 1.0) * (3.0 / f.field.rate(z).norm()).min(1.0);
            let h = 1e-5;
            let fd = (f.eval(z, t + h).1 - f.eval(z, t - h).1) / (2.0 * h);
            let j = f.jacobian(z, t);
            worst = worst.max((j - fd).norm() / j.norm());
            min_det = min_det.min(j.norm());
        }
    }
    rep.metric("max_rel_error", worst);
    rep.metric("min_abs_det", min_det);
    rep.check(worst < 1e-5, "finite differences disagree above 1e-5");
    rep.check(min_det > 0.0, "vanishing determinant");
    rep.finish()
}

/// `-r coth(r t)` with `r^2 = z`, the solution of `w' = w^2 - z` from infinity.
fn coth_solution(z: C, t: C) -> SpherePoint<f64> {
    let r = z.sqrt();
    let sh = (r * t).sinh();
    if sh.norm() == 0.0 {
        SpherePoint::Infinity
    } else {
        SpherePoint::from_value(-r * (r * t).cosh() / sh)
    }
}

/// The double section `w^2 = z` with the section at infinity.
pub fn crit7(seed: u64) -> CriterionReport {
    let mut rep = CriterionReport::new(7, "double section w^2 = z");
    let mut rng = sampling::rng(seed);
    let d = DoubleSection::from_polys(Poly::one(), Poly::zero(), Poly::from_reals(&[0.0, -1.0])).expect("w^2 - z");
    let field = RiccatiField::new(EntireExpr::zero(), d.clone());
    let map = match DominatingMapG::new(field.clone(), Section::Infinity, &SampleSpec::new(1000, seed)) {
        Ok(m) => m,
        Err(e) => {
            rep.check(false, &format!("section rejected: {e}"));
            return rep.finish();
        }
    };
    let (mut formula, mut oracle, mut relabel, mut min_dist, mut errors) = (0f64, 0f64, 0f64, f64::INFINITY, 0usize);
    for i in 0..1000 {
        let z = disk_point(&mut rng, 3.0);
        let t = disk_point(&mut rng, 2.0);
        let Ok(g) = map.eval(z, t) else {
            errors += 1;
            continue;
        };
        if let Ok(roots) = d.fiber_roots(z) {
            for r in roots.points() {
                min_dist = min_dist.min(g.chordal(&r));
            }
        }
        if i % 5 == 0 {
            formula = formula.max(g.chordal(&coth_solution(z, t)));
            match field.oracle_flow(t, z, SpherePoint::Infinity, 8) {
                Ok(o) => oracle = oracle.max(g.chordal(&o)),
                Err(_) => errors += 1,
            }
            match field.flow_ordered(t, z, SpherePoint::Infinity, true) {
                Ok(o) => relabel = relabel.max(g.chordal(&o)),
                Err(_) => errors += 1,
            }
        }
    }
    rep.metric("multiplier_formula_distance", formula);
    rep.metric("oracle_distance", oracle);
    rep.metric("relabel_distance", relabel);
    rep.metric("min_root_distance", min_dist);
    rep.check(formula < 1e-7, "multiplier formula disagrees");
    rep.check(oracle < 1e-7, "oracle disagrees");
    rep.check(relabel < 1e-10, "root relabeling changes the flow");
    rep.check(min_dist > 0.0, "an output meets a fiber root");
    rep.check(errors == 0, &format!("{errors} evaluations failed"));
    rep.finish()
}

/// Ten (iii)/(iv) entries of order `k`, with generic seeded coefficients.
fn tangent_instances<R: Rng>(rng: &mut R) -> Vec<FamilySpec<f64>> {
    let mut out = Vec::new();
    for k in [1u32, 2] {
        for _ in 0..3 {
            let mut a0 = vec![c(0.0, 0.0); k as usize];
            a0.extend((0..2).map(|_| square(rng, 1.0)));
            out.push(FamilySpec::Iii { a: square(rng, 1.0), k, a0: Poly::new(a0) });
        }
        for (m, n) in [(k + 1, 1), (2 * k + 1, 2)] {
            let mut a0 = vec![c(0.0, 0.0); k as usize];
            a0.push(square(rng, 1.0));
            out.push(FamilySpec::Iv { a: square(rng, 1.0), k, m, n, a0: Poly::new(a0) });
        }
    }
    out
}

/// Tangency after pulling back, eigenvalue ratios and alpha conjugation.
pub fn crit8(seed: u64) -> CriterionReport {
    let mut rep = CriterionReport::new(8, "tangent catalog");
    let mut rng = sampling::rng(seed);

    // one pole of order k at 0
    let s1 = RationalFn::new(Poly::from_reals(&[2.0, -1.0, 1.0]), Poly::identity()).expect("s1");
    let s2 = RationalFn::new(Poly::from_reals(&[1.0, -0.5, 0.0, 1.0]), Poly::from_reals(&[0.0, 0.0, 1.0])).expect("s2");
    let (mut worst, mut min_norm, mut count) = (0f64, f64::INFINITY, 0usize);
    for spec in tangent_instances(&mut rng) {
        let (k, s) = match &spec {
            FamilySpec::Iii { k, .. } | FamilySpec::Iv { k, .. } => (*k, if *k == 1 { &s1 } else { &s2 }),
            _ => unreachable!(),
        };
        let built = construct_gap(s)
            .and_then(|cert| lbl_automorphism(&cert, k))
            .and_then(|phi| Ok(pushforward(&phi.inverse(), &instantiate_family(&spec)?)));
        match built {
            Ok(x) => {
                let curve = Curve::Graph { s: s.clone() };
                let samples = SampleSpec::new(50, seed);
                let r = tangency_check(&x, &curve, &samples);
                worst = worst.max(r.max_residual / r.scale);
                min_norm = min_norm.min(min_norm_on_curve(&x, &curve, &samples));
                count += 1;
            }
            Err(e) => rep.check(false, &format!("{} pull-back failed: {e}", spec.name())),
        }
    }
    rep.metric("max_tangency_residual", worst);
    rep.metric("min_norm_on_graph", min_norm);
    rep.check(count == 10 && worst < 1e-9, "tangency residual above 1e-9");
    rep.check(min_norm > 0.0, "a pulled-back field vanishes on the graph");

    let mut eig = 0f64;
    for _ in 0..4 {
        let a = square(&mut rng, 1.0) + c(0.5, 0.0);
        let big_a = Poly::new(vec![square(&mut rng, 1.0) + c(0.5, 0.0), c(0.3, -0.2)]);
        let a0 = big_a.coeff(0);
        let (m, n) = (3, 2);
        let k = 2u32;
        let cases = [
            (FamilySpec::I { a, b: c(0.0, 0.0), big_a: big_a.clone() }, a / a0),
            (FamilySpec::Ii { a, m, n, big_a: big_a.clone() }, a0 * n as f64 / (a - a0 * m as f64)),
            (FamilySpec::Iii { a, k, a0: Poly::new(vec![c(0.0, 0.0), c(0.0, 0.0), a0]) }, c(-1.0 / k as f64, 0.0)),
        ];
        for (spec, want) in cases {
            let got = spec
                .designated_zero()
                .ok_or_else(|| Error::Invalid("no designated zero".into()))
                .and_then(|p| eigenratio(&instantiate_family(&spec)?, p));
            match got {
                Ok(r) => eig = eig.max(rel(r.lambda, want)),
                Err(e) => rep.check(false, &format!("eigenratio failed on {}: {e}", spec.name())),
            }
        }
    }
    rep.metric("max_eigenratio_error", eig);
    rep.check(eig < 1e-10, "eigenvalue ratio off by more than 1e-10");

    let zs: Vec<C> = (0..8).map(|_| disk_point(&mut rng, 2.0)).collect();
    let mut alpha = 0f64;
    for j in 0..5u32 {
        let a = square(&mut rng, 1.0) + c(0.5, 0.0);
        let tail = square(&mut rng, 1.0);
        let k = 1 + j % 2;
        let spec = if j < 3 {
            // A + a k must be divisible by z^k
            let mut coeffs = vec![-a * k as f64];
            coeffs.resize(k as usize, c(0.0, 0.0));
            coeffs.push(tail);
            FamilySpec::I { a, b: c(0.0, 0.0), big_a: Poly::new(coeffs) }
        } else {
            let (m, n) = (k + 2, 1);
            let mut coeffs = vec![a / (m - n * k) as f64];
            coeffs.resize(k as usize, c(0.0, 0.0));
            coeffs.push(tail);
            FamilySpec::Ii { a, m, n, big_a: Poly::new(coeffs) }
        };
        let pair = alpha_conjugate(&spec, k)
            .and_then(|x| Ok((x, instantiate_family(&spec.alpha_target(k)?)?)));
        match pair {
            Ok((x, y)) => alpha = alpha.max(x.coeff_distance(&y, &zs)),
            Err(e) => rep.check(false, &format!("alpha conjugation failed on {}: {e}", spec.name())),
        }
    }
    rep.metric("max_alpha_coefficient_distance", alpha);
    rep.check(alpha < 1e-10, "alpha conjugate differs from the catalog entry");
    let bad = FamilySpec::I { a: c(1.0, 0.0), b: c(0.0, 0.0), big_a: Poly::from_reals(&[1.0, 2.0]) };
    let rejected = matches!(alpha_conjugate(&bad, 1), Err(Error::NotHolomorphic { .. }));
    rep.check(rejected, "non-holomorphic parameter set was accepted");
    rep.finish()
}

/// Covering identities, round trips, membership and a first integral.
pub fn crit9(seed: u64) -> CriterionReport {
    let mut rep = CriterionReport::new(9, "covering");
    let mut rng = sampling::rng(seed);
    let mut pairs = Vec::new();
    for r in 2..=9u32 {
        for s in 2..=9u32 {
            if gcd(r as u64, s as u64) == 1 {
                pairs.push((r, s));
            }
        }
    }
    let mut bad_identity = 0;
    for &(r, s) in &pairs {
        let a = square(&mut rng, 1.0) + c(1.0, 0.0);
        match CuspCurve::new(r, s, a) {
            Ok(cc) if identity_check(&cc).pass => {}
            _ => bad_identity += 1,
        }
    }
    rep.metric("coprime_pairs", pairs.len() as f64);
    rep.check(bad_identity == 0, &format!("identity fails for {bad_identity} pairs"));

    let (mut trip, mut outside, mut errors) = (0f64, 0usize, 0usize);
    for i in 0..10_000 {
        let (r, s) = pairs[i % pairs.len()];
        let a = c(1.0, 0.5);
        let cc = CuspCurve::new(r, s, a).expect("a != 0");
        let z = disk_point(&mut rng, 1.5);
        let t = disk_point(&mut rng, 1.5);
        let (x, y) = cc.big_gamma(z, t);
        if !cc.membership(x, y) {
            outside += 1;
        }
        if i % 10 == 0 {
            let scale = 1f64.max(x.norm()).max(y.norm());
            match (cc.gamma_preimage(x, y), cc.big_gamma_preimage(x, y)) {
                (Ok((u, v)), Ok((z1, t1))) => {
                    let g = cc.gamma(u, v);
                    let bg = cc.big_gamma(z1, t1);
                    let e = (g.0 - x).norm().max((g.1 - y).norm()).max((bg.0 - x).norm()).max((bg.1 - y).norm());
                    trip = trip.max(e / scale);
                }
                _ => errors += 1,
            }
        }
    }
    rep.metric("max_round_trip", trip);
    rep.check(trip < 1e-10, "round trip above 1e-10");
    rep.check(outside == 0, &format!("{outside} outputs outside the complement"));
    rep.check(errors == 0, &format!("{errors} preimages failed"));
    errors = 0;

    let times: Vec<C> = (0..8).map(|j| Complex::from_polar(1.0, j as f64 * PI / 4.0)).collect();
    let mut drift = 0f64;
    for &(r, s) in pairs.iter().filter(|(r, s)| r.max(s) <= &5) {
        let start = (disk_point(&mut rng, 1.0) + c(0.2, 0.0), disk_point(&mut rng, 1.0));
        match first_integral_drift(r, s, start, &times) {
            Ok(d) => drift = drift.max(d),
            Err(_) => errors += 1,
        }
    }
    rep.metric("max_first_integral_drift", drift);
    rep.check(drift < 1e-8, "first-integral drift above 1e-8");
    rep.check(errors == 0, &format!("{errors} first-integral runs failed"));
    rep.finish()
}

fn exp_error(rtol: f64) -> Result<f64> {
    let spec = IntegrationSpec::to(c(1.0, 0.0)).with_tolerances(rtol, rtol * 1e-2);
    let end = integrate(|_, w| (c(0.0, 0.0), w), (c(0.0, 0.0), c(1.0, 0.0)), &spec)?.end.1;
    Ok((end - std::f64::consts::E).norm())
}

/// Order of accuracy and blow-up detection of the oracle.
///
/// The order test halves `rtol` from `1e-6` eight times on `w' = w` and
/// requires every halving to cut the endpoint error fourfold. For error-per-
/// step control the endpoint error is proportional to `rtol`, so this part
/// is expected to fail; the fixed-step ratio is reported alongside.
pub fn crit10(_seed: u64) -> CriterionReport {
    let mut rep = CriterionReport::new(10, "oracle health");
    let errs: Result<Vec<f64>> = (0..=8).map(|k| exp_error(1e-6 / 2f64.powi(k))).collect();
    match errs {
        Ok(errs) => {
            let ratio = errs.windows(2).map(|w| w[0] / w[1]).fold(f64::INFINITY, f64::min);
            rep.metric("min_rtol_halving_ratio", ratio);
            rep.check(ratio >= 4.0, "halving rtol does not cut the error fourfold");
        }
        Err(e) => rep.check(false, &format!("oracle failed on w' = w: {e}")),
    }
    let f = |_: C, w: C| (c(0.0, 0.0), w);
    let path = [c(0.0, 0.0), c(1.0, 0.0)];
    let fixed: Vec<f64> = [4usize, 8, 16]
        .iter()
        .map(|&n| (integrate_fixed(f, (c(0.0, 0.0), c(1.0, 0.0)), &path, n).1 - std::f64::consts::E).norm())
        .collect();
    let step_ratio = (fixed[0] / fixed[1]).min(fixed[1] / fixed[2]);
    rep.metric("min_step_halving_ratio", step_ratio);
    rep.check(step_ratio >= 16.0, "halving the step does not show fourth order");

    let blow = integrate(|_, w| (c(0.0, 0.0), w * w), (c(0.0, 0.0), c(1.0, 0.0)), &IntegrationSpec::to(c(1.0, 0.0)));
    match blow {
        Err(Error::Escape { tau, .. }) => {
            rep.metric("escape_tau", tau);
            rep.check((0.99..=1.0).contains(&tau), "escape reported outside [0.99, 1]");
        }
        _ => rep.check(false, "no escape on w' = w^2"),
    }
    rep.finish()
}

pub type Suite = fn(u64) -> CriterionReport;

pub const SUITES: [Suite; 10] = [crit1, crit2, crit3, crit4, crit5, crit6, crit7, crit8, crit9, crit10];

pub fn run(id: u8, seed: u64) -> Option<CriterionReport> {
    SUITES.get((id as usize).checked_sub(1)?).map(|f| f(seed))
}

pub fn run_all(seed: u64) -> Vec<CriterionReport> {
    SUITES.iter().map(|f| f(seed)).collect()
}
