use holodom::complex_poly::{poly_roots, Poly, RationalFn};
use num_complex::Complex;
use proptest::prelude::*;

type C = Complex<f64>;

fn cx() -> impl Strategy<Value = C> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| C::new(a, b))
}

/// Points at least `gap` apart, as roots of a polynomial.
fn spread_roots(n: usize, radius: f64, gap: f64) -> impl Strategy<Value = Vec<C>> {
    prop::collection::vec((0.0f64..1.0, 0.0f64..std::f64::consts::TAU), n).prop_filter_map(
        "roots too close",
        move |v| {
            let pts: Vec<C> = v.iter().map(|&(r, th)| C::from_polar(radius * r.sqrt(), th)).collect();
            let ok = pts.iter().enumerate().all(|(i, a)| pts[..i].iter().all(|b| (a - b).norm() >= gap));
            ok.then_some(pts)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn planted_common_factor_is_cancelled(
        roots in spread_roots(5, 1.5, 0.25),
        split in 1usize..3,
        lead in cx(),
    ) {
        // roots[..split] go to the numerator, the next two to the denominator,
        // the remaining ones to both
        let lead = lead + C::new(1.5, 0.0);
        let p = Poly::from_roots(&roots[..split]).scale(lead);
        let q = Poly::from_roots(&roots[split..split + 2]);
        let common = Poly::from_roots(&roots[split + 2..]);
        let s = RationalFn::new(&p * &common, &q * &common).unwrap();
        prop_assert_eq!(s.den().degree(), Some(2));
        prop_assert_eq!(s.num().degree(), Some(split));
        for z in [C::new(2.1, 0.3), C::new(-0.4, 2.2), C::new(0.0, -2.5)] {
            let want = p.eval(z) / q.eval(z);
            prop_assert!((s.eval_raw(z) - want).norm() <= 1e-9 * want.norm().max(1.0));
        }
    }

    #[test]
    fn roots_are_complete(
        roots in spread_roots(4, 2.0, 0.3),
        mults in prop::collection::vec(1usize..4, 4),
        lead in cx(),
    ) {
        let lead = lead + C::new(0.0, 1.5);
        let planted: Vec<C> = roots.iter().zip(&mults).flat_map(|(r, &m)| std::iter::repeat_n(*r, m)).collect();
        let p = Poly::from_roots(&planted).scale(lead);
        let found = poly_roots(&p).unwrap();
        let total: usize = found.iter().map(|r| r.multiplicity).sum();
        prop_assert_eq!(total, planted.len());
        for (r, &m) in roots.iter().zip(&mults) {
            let hit = found.iter().find(|f| (f.value - r).norm() < 1e-6);
            prop_assert!(hit.is_some(), "root {} missing from {:?}", r, found);
            prop_assert_eq!(hit.unwrap().multiplicity, m);
        }
    }

    #[test]
    fn principal_parts_leave_the_polynomial_part(
        poles in spread_roots(3, 1.5, 0.3),
        orders in prop::collection::vec(1usize..3, 3),
        num in prop::collection::vec(cx(), 1..8),
    ) {
        let planted: Vec<C> = poles.iter().zip(&orders).flat_map(|(r, &m)| std::iter::repeat_n(*r, m)).collect();
        let den = Poly::from_roots(&planted);
        let num = Poly::new(num);
        prop_assume!(poles.iter().all(|&p| num.eval_abs(p) > 0.05 * num.norm()));
        let s = RationalFn::new(num.clone(), den.clone()).unwrap();
        let parts = s.principal_parts().unwrap();
        prop_assert_eq!(parts.iter().map(|p| p.order).sum::<usize>(), planted.len());
        let (quo, _) = num.divrem(&den);
        for z in [C::new(2.0, 0.5), C::new(-1.7, -1.1), C::new(0.3, 1.9)] {
            let rest = s.eval_raw(z) - parts.iter().map(|p| p.eval(z)).sum::<C>();
            let scale = s.eval_raw(z).norm().max(quo.eval(z).norm()).max(1.0);
            prop_assert!((rest - quo.eval(z)).norm() <= 1e-8 * scale, "{} vs {}", rest, quo.eval(z));
        }
    }
}
