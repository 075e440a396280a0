use holodom::acceptance::{random_cert, random_map};
use holodom::complex_poly::{Poly, SpherePoint};
use holodom::double_section_flows::{DominatingMapG, DoubleSection, RiccatiField, Section};
use holodom::entire_expr::EntireExpr;
use holodom::flow_oracle::{integrate, IntegrationSpec};
use holodom::graph_complement_flows::VerticalFieldZu;
use holodom::sampling::{rng, SampleSpec};
use holodom::scalar::two_pi_i;
use num_complex::Complex;
use proptest::prelude::*;

type C = Complex<f64>;

fn cx(r: f64) -> impl Strategy<Value = C> {
    (-r..r, -r..r).prop_map(|(a, b)| C::new(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn gap_identity_where_the_denominator_is_large(seed in any::<u64>(), z in cx(1.5)) {
        let cert = random_cert(&mut rng(seed));
        let q1 = cert.s.den().eval(z);
        prop_assume!(q1.norm() > 0.1);
        let s = cert.s.eval_raw(z);
        let h = cert.h.eval(z);
        let gap = cert.g1.eval(z).exp() / q1;
        let scale = h.norm().max(s.norm()).max(gap.norm());
        prop_assert!((h - s + gap).norm() <= 1e-9 * scale);

        // s - sqrt(P)/(2 pi i) = h, with P the squared period of Z^(-g1)
        let field = VerticalFieldZu::new(cert.s.clone(), EntireExpr::poly(cert.g1.scale(C::new(-1.0, 0.0))));
        let period = field.period(z).unwrap();
        prop_assert!((s - period / two_pi_i::<f64>() - h).norm() <= 1e-9 * scale);
    }

    #[test]
    fn gap_degree_is_below_the_pole_count(seed in any::<u64>()) {
        let cert = random_cert(&mut rng(seed));
        let poles: usize = cert.s.poles().unwrap().iter().map(|r| r.multiplicity).sum();
        prop_assert!(cert.g1.degree().is_none_or(|d| d < poles));
    }

    #[test]
    fn graph_is_fixed_and_avoided(seed in any::<u64>(), z in cx(1.5), t in cx(1.0)) {
        let f = random_map(&mut rng(seed));
        let q1 = f.s().den().eval(z);
        prop_assume!(q1.norm() > 0.1);
        let s = f.s().eval_raw(z);
        let (z1, w1) = f.field.flow(t, z, s);
        prop_assert_eq!(z1, z);
        prop_assert!((w1 - s).norm() <= 1e-12 * s.norm().max(1.0));

        let (z2, w2) = f.eval(z, t);
        prop_assert_eq!(z2, z);
        let expo = f.cert.g1.eval(z) + f.field.rate(z) * t;
        prop_assume!(expo.re.abs() < 20.0);
        prop_assert!(w2 != s);
    }

    #[test]
    fn every_point_off_the_graph_is_reached(seed in any::<u64>(), z in cx(1.5), w in cx(3.0)) {
        let f = random_map(&mut rng(seed));
        let q1 = f.s().den().eval(z);
        let s = f.s().eval_raw(z);
        prop_assume!(q1.norm() > 0.1 && (w - s).norm() > 1e-3);
        let t = f.preimage(z, w).unwrap();
        let (_, w1) = f.eval(z, t);
        prop_assert!((w1 - w).norm() <= 1e-8 * w.norm().max(1.0), "{} vs {}", w1, w);
    }

    #[test]
    fn riccati_roots_are_fixed_and_labels_do_not_matter(
        a in cx(1.0), b in cx(1.0), c in cx(1.0),
        z in cx(1.5), w in cx(2.0), t1 in cx(0.7), t2 in cx(0.7),
    ) {
        let d = DoubleSection::from_polys(
            Poly::constant(C::new(1.0, 0.0)),
            Poly::new(vec![b, a]),
            Poly::new(vec![c, C::new(0.0, 0.0), C::new(-1.0, 0.0)]),
        ).unwrap();
        let field = RiccatiField::new(EntireExpr::poly(Poly::new(vec![C::new(0.0, 0.0), a * 0.3])), d.clone());
        let roots = d.fiber_roots(z).unwrap().points();
        prop_assume!(roots.len() == 2 && roots[0].chordal(&roots[1]) > 1e-3);
        for r in &roots {
            let moved = field.flow(t1, z, *r).unwrap();
            prop_assert!(moved.chordal(r) < 1e-10);
        }
        let p = SpherePoint::Finite(w);
        let one = field.flow_ordered(t1, z, p, false).unwrap();
        let other = field.flow_ordered(t1, z, p, true).unwrap();
        prop_assert!(one.chordal(&other) < 1e-9);

        let direct = field.flow(t1 + t2, z, p).unwrap();
        let stepped = field.flow(t2, z, field.flow(t1, z, p).unwrap()).unwrap();
        prop_assert!(direct.chordal(&stepped) < 1e-8);
    }

    #[test]
    fn riccati_map_is_total_and_avoids_the_double_section(
        b in cx(1.0), c in cx(1.0), z in cx(2.0), t in cx(2.0),
    ) {
        let d = DoubleSection::from_polys(
            Poly::constant(C::new(1.0, 0.0)),
            Poly::new(vec![b, C::new(0.5, 0.0)]),
            Poly::new(vec![c, C::new(0.0, 0.0), C::new(-1.0, 0.0)]),
        ).unwrap();
        let field = RiccatiField::new(EntireExpr::zero(), d.clone());
        let g = DominatingMapG::new(field, Section::Infinity, &SampleSpec::new(200, 3)).unwrap();
        let roots = d.fiber_roots(z).unwrap().points();
        let img = g.eval(z, t).unwrap();
        let gap = roots.iter().fold(f64::INFINITY, |m, r| m.min(img.chordal(r)));
        let sep = if roots.len() == 2 { roots[0].chordal(&roots[1]) } else { 0.0 };
        prop_assume!(sep > 1e-3);
        prop_assert!(gap > 0.0);
    }

    #[test]
    fn oracle_is_path_independent(
        seed in any::<u64>(), z in cx(1.0), w in cx(1.0), end in cx(1.0), via in cx(1.0),
    ) {
        let f = random_map(&mut rng(seed));
        let field = |z: C, w: C| f.field.eval(z, w);
        let straight = integrate(field, (z, w), &IntegrationSpec::to(end)).unwrap().end;
        let bent = integrate(field, (z, w), &IntegrationSpec::along(&[via, end])).unwrap().end;
        let scale = straight.1.norm().max(1.0);
        prop_assert!((straight.1 - bent.1).norm() <= 1e-8 * scale, "{:?} vs {:?}", straight, bent);
        prop_assert!((straight.0 - bent.0).norm() <= 1e-12);
    }
}
