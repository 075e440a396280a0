use holodom::complex_poly::Poly;
use holodom::entire_expr::{EntireExpr, ExpPoly};
use num_complex::Complex;
use proptest::prelude::*;

type C = Complex<f64>;

fn cx(r: f64) -> impl Strategy<Value = C> {
    (-r..r, -r..r).prop_map(|(a, b)| C::new(a, b))
}

/// `e^g` minus its Taylor polynomial of order `k - 1` at `z0`, over `(z - z0)^k`.
fn taylor_remainder(g: &Poly<f64>, z0: C, k: usize, bump: C) -> (EntireExpr<f64>, Poly<f64>) {
    let e = EntireExpr::exp(EntireExpr::poly(g.clone()));
    let mut jet = e.jet(z0, k - 1);
    jet[0] += bump;
    // sum_j jet[j] (z - z0)^j
    let x = Poly::new(vec![-z0, C::new(1.0, 0.0)]);
    let taylor = jet.iter().rev().fold(Poly::zero(), |acc, &c| &(&acc * &x) + &Poly::constant(c));
    let num = EntireExpr::sum(vec![e, EntireExpr::neg(EntireExpr::poly(taylor))]);
    (num, x.pow(k as u32))
}

/// A polynomial of degree at least one.
fn nonconstant() -> impl Strategy<Value = Poly<f64>> {
    prop::collection::vec(cx(0.8), 2..4).prop_map(|mut v| {
        v[1] += C::new(0.3, 0.0);
        Poly::new(v)
    })
}

fn quotient_parts(e: &EntireExpr<f64>) -> &holodom::entire_expr::Quotient<f64> {
    match e {
        EntireExpr::RemovableQuotient(q) => q,
        other => panic!("expected a quotient, got {other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn removability_detects_a_perturbed_jet(
        g in nonconstant(),
        z0 in cx(1.0),
        k in 1usize..4,
    ) {
                let (num, den) = taylor_remainder(&g, z0, k, C::new(0.0, 0.0));
        prop_assert!(EntireExpr::removable_quotient(num, den).is_ok());
        let (num, den) = taylor_remainder(&g, z0, k, C::new(1e-3, 0.0));
        prop_assert!(EntireExpr::removable_quotient(num, den).is_err());
    }

    #[test]
    fn series_and_direct_evaluation_agree(
        g in nonconstant(),
        z0 in cx(1.0),
        k in 1usize..4,
        frac in 0.5f64..2.0,
        theta in 0.0f64..std::f64::consts::TAU,
    ) {
        let (num, den) = taylor_remainder(&g, z0, k, C::new(0.0, 0.0));
        let e = EntireExpr::removable_quotient(num, den).unwrap();
        let q = quotient_parts(&e);
        let z = z0 + C::from_polar(frac * q.r_series(), theta);
        let (a, b) = (q.eval_direct(z), q.eval_series_at_nearest(z).unwrap());
        prop_assert!((a - b).norm() <= 1e-8 * a.norm().max(1.0), "{} vs {}", a, b);
    }

    #[test]
    fn antiderivative_differentiates_back(
        terms in prop::collection::vec((prop::collection::vec(cx(1.0), 1..4), cx(1.5)), 1..4),
        tau in cx(1.0),
    ) {
        let f = terms.into_iter().fold(ExpPoly::zero(), |acc, (p, mu)| acc.add(&ExpPoly::term(Poly::new(p), mu)));
        let big_f = f.antiderivative();
        prop_assert!(big_f.derivative().distance(&f) < 1e-10);
        let h = 1e-5;
        let fd = (big_f.eval(tau + h) - big_f.eval(tau - h)) / (2.0 * h);
        prop_assert!((fd - f.eval(tau)).norm() <= 1e-6 * f.eval(tau).norm().max(1.0));
        prop_assert!(big_f.integral_from_zero(C::new(0.0, 0.0)).norm() < 1e-14);
    }
}
