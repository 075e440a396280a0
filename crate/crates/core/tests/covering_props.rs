use holodom::covering_domination::CuspCurve;
use holodom::tangent_catalog::gcd;
use num_complex::Complex;
use proptest::prelude::*;

type C = Complex<f64>;

fn cx(r: f64) -> impl Strategy<Value = C> {
    (-r..r, -r..r).prop_map(|(a, b)| C::new(a, b))
}

fn curve() -> impl Strategy<Value = CuspCurve<f64>> {
    (1u32..6, 1u32..6, cx(1.5))
        .prop_filter("need coprime exponents and a != 0", |(r, s, a)| gcd(*r as u64, *s as u64) == 1 && r * s > 1 && a.norm() > 0.2)
        .prop_map(|(r, s, a)| CuspCurve::new(r, s, a).unwrap())
}

fn close(a: (C, C), b: (C, C), tol: f64) -> bool {
    let scale = a.0.norm().max(a.1.norm()).max(1.0);
    (a.0 - b.0).norm() <= tol * scale && (a.1 - b.1).norm() <= tol * scale
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gamma_round_trips(c in curve(), u in cx(1.2), v in cx(1.2)) {
        prop_assume!(u.norm() > 0.1 && v.norm() > 0.1);
        let (x, y) = c.gamma(u, v);
        let back = c.gamma_preimage(x, y).unwrap();
        prop_assert!(close(back, (u, v), 1e-10), "{:?} vs {:?}", back, (u, v));
        prop_assert!(close(c.gamma(back.0, back.1), (x, y), 1e-10));
    }

    #[test]
    fn image_points_have_preimages(c in curve(), z in cx(1.2), t in cx(1.5)) {
        let p = c.big_gamma(z, t);
        prop_assume!(z.norm() > 0.1 && (c.a - t.exp()).norm() > 0.1);
        prop_assert!(c.membership(p.0, p.1));
        let (z1, t1) = c.big_gamma_preimage(p.0, p.1).unwrap();
        prop_assert!(close(c.big_gamma(z1, t1), p, 1e-9));
        prop_assert!(c.big_gamma_jacobian_fd(z, t, 1e-5).norm() > 0.0);
    }

    #[test]
    fn excluded_points_have_no_preimage(c in curve(), x in cx(1.5), which in 0usize..2) {
        prop_assume!(x.norm() > 0.1);
        let p = if which == 0 { (x, C::new(0.0, 0.0)) } else { (C::new(0.0, 0.0), x) };
        prop_assert!(!c.membership(p.0, p.1));
        prop_assert!(c.big_gamma_preimage(p.0, p.1).is_err());
    }
}
