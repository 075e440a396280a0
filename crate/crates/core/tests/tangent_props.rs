use holodom::complex_poly::Poly;
use holodom::entire_expr::EntireExpr;
use holodom::sampling::SampleSpec;
use holodom::tangent_catalog::{
    eigenratio, gcd, instantiate_family, pushforward, same_ratio, tangency_check, Curve, FamilySpec, FiberAutomorphism,
};
use num_complex::Complex;
use proptest::prelude::*;

type C = Complex<f64>;

fn cx(r: f64) -> impl Strategy<Value = C> {
    (-r..r, -r..r).prop_map(|(a, b)| C::new(a, b))
}

fn small_poly(max_len: usize, r: f64) -> impl Strategy<Value = Poly<f64>> {
    prop::collection::vec(cx(r), 1..=max_len).prop_map(Poly::new)
}

fn automorphism() -> impl Strategy<Value = FiberAutomorphism<f64>> {
    (small_poly(3, 0.4), small_poly(3, 1.0))
        .prop_map(|(g, d)| FiberAutomorphism::new(EntireExpr::poly(g), EntireExpr::poly(d)))
}

/// An invertible matrix with entries of size at most 2.
fn linear_map() -> impl Strategy<Value = [[C; 2]; 2]> {
    (cx(2.0), cx(2.0), cx(2.0), cx(2.0))
        .prop_map(|(a, b, c, d)| [[a, b], [c, d]])
        .prop_filter("nearly singular", |m| (m[0][0] * m[1][1] - m[0][1] * m[1][0]).norm() > 0.2)
}

fn apply(m: &[[C; 2]; 2], p: (C, C)) -> (C, C) {
    (m[0][0] * p.0 + m[0][1] * p.1, m[1][0] * p.0 + m[1][1] * p.1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn pushforward_is_functorial(
        phi in automorphism(), psi in automorphism(),
        a in cx(1.0), b in cx(1.0), big_a in small_poly(3, 1.0),
        pts in prop::collection::vec((cx(1.5), cx(1.5)), 5),
    ) {
        prop_assume!(!big_a.is_zero());
        let x = instantiate_family(&FamilySpec::I { a, b, big_a }).unwrap();
        let whole = pushforward(&phi.compose(&psi), &x);
        let stepwise = pushforward(&phi, &pushforward(&psi, &x));
        for (z, w) in pts {
            let (p1, q1) = whole.eval(z, w);
            let (p2, q2) = stepwise.eval(z, w);
            let scale = p1.norm().max(q1.norm()).max(1.0);
            prop_assert!((p1 - p2).norm() <= 1e-12 * scale);
            prop_assert!((q1 - q2).norm() <= 1e-12 * scale, "{} vs {}", q1, q2);
        }
    }

    #[test]
    fn pushforward_keeps_tangency(
        phi in automorphism(), a in cx(1.0), k in 1u32..4, tail in small_poly(3, 1.0), seed in any::<u64>(),
    ) {
        let a0 = &tail * &Poly::monomial(C::new(1.0, 0.0), k as usize);
        let x = instantiate_family(&FamilySpec::Iii { a, k, a0 }).unwrap();
        let base = Curve::InverseMonomial { k };
        prop_assert!(tangency_check(&x, &base, &SampleSpec::new(100, seed)).pass);
        let curve = Curve::Mapped { phi: phi.clone(), base: Box::new(base) };
        let rep = tangency_check(&pushforward(&phi, &x), &curve, &SampleSpec::new(100, seed));
        prop_assert!(rep.pass, "{:?}", rep);
    }

    #[test]
    fn eigenratio_survives_linear_changes(
        m in linear_map(), a in cx(1.0), b in cx(1.0), big_a in small_poly(3, 1.0), r in 1u32..5, s in 1u32..5,
    ) {
        prop_assume!(gcd(r as u64, s as u64) == 1 && a.norm() > 0.2 && big_a.eval(-b / a).norm() > 0.2);
        let cases = [
            (FamilySpec::Prop7 { r, s }, (C::new(0.0, 0.0), C::new(0.0, 0.0))),
            (FamilySpec::I { a, b, big_a }, (-b / a, C::new(0.0, 0.0))),
        ];
        for (spec, p) in cases {
            let x = instantiate_family(&spec).unwrap();
            let before = eigenratio(&x, p).unwrap().lambda;
            let after = eigenratio(&x.linear_pushforward(m).unwrap(), apply(&m, p)).unwrap().lambda;
            prop_assert!(same_ratio(before, after, 1e-8), "{}: {} vs {}", spec.name(), before, after);
        }
    }
}
