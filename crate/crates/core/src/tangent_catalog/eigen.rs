use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::plane_field::PlaneField;
use crate::error::{Error, Result};
use crate::scalar::{fmt_cx, to_f64, Real};

pub const MAX_DENOMINATOR: u64 = 64;
pub const RATIONAL_TOL: f64 = 1e-9;
/// `|X(p)|` allowed at a claimed zero.
pub const ZERO_TOL: f64 = 1e-10;

/// Best approximation `num/den` with `den <= max_den` from the continued
/// fraction of `x`, accepted when within `tol * max(1, |x|)`.
pub fn rational_reconstruct(x: f64, max_den: u64, tol: f64) -> Option<(i64, u64)> {
    if !x.is_finite() {
        return None;
    }
    let bound = tol * x.abs().max(1.0);
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let (h2, k2) = (ai * h1 + h0, ai * k1 + k0);
        if k2 > max_den as i128 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if (x - h1 as f64 / k1 as f64).abs() <= bound {
            return Some((h1 as i64, k1 as u64));
        }
        let frac = r - a;
        if frac == 0.0 {
            break;
        }
        r = 1.0 / frac;
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EigenClass {
    NonRealTypeC,
    /// Real and positive but not rational within tolerance; this is not a
    /// proof of irrationality.
    IrrationalRealTypeC,
    PositiveRationalTypeCStar,
    NegativeRationalOrOther,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenReport {
    pub lambda: Complex<f64>,
    pub eigenvalues: [Complex<f64>; 2],
    /// `(num, den)` when the real value reconstructs.
    pub rational: Option<(i64, u64)>,
    pub class: EigenClass,
}

/// Eigenvalues of a 2x2 matrix, paired with the diagonal entries they are
/// closest to.
fn paired_eigenvalues<T: Real>(j: [[Complex<T>; 2]; 2]) -> [Complex<T>; 2] {
    let two = T::lit(2.0);
    let tr = j[0][0] + j[1][1];
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    let disc = ((j[0][0] - j[1][1]) * (j[0][0] - j[1][1]) / T::lit(4.0) + j[0][1] * j[1][0]).sqrt();
    let half = tr / two;
    let (mut a, mut b) = (half + disc, half - disc);
    // the root of larger modulus is accurate; recover the other from det
    if a.norm() >= b.norm() {
        if !a.norm().is_zero() {
            b = det / a;
        }
    } else {
        a = det / b;
    }
    let keep = (a - j[0][0]).norm() + (b - j[1][1]).norm();
    let swap = (b - j[0][0]).norm() + (a - j[1][1]).norm();
    if swap < keep {
        [b, a]
    } else {
        [a, b]
    }
}

pub fn classify_ratio(lambda: Complex<f64>) -> (EigenClass, Option<(i64, u64)>) {
    let scale = lambda.norm().max(1.0);
    if lambda.im.abs() > RATIONAL_TOL * scale {
        return (EigenClass::NonRealTypeC, None);
    }
    let rat = rational_reconstruct(lambda.re, MAX_DENOMINATOR, RATIONAL_TOL);
    let class = match rat {
        Some((n, _)) if n > 0 => EigenClass::PositiveRationalTypeCStar,
        Some(_) => EigenClass::NegativeRationalOrOther,
        None if lambda.re > 0.0 => EigenClass::IrrationalRealTypeC,
        None => EigenClass::NegativeRationalOrOther,
    };
    (class, rat)
}

/// Ratio of the Jacobian eigenvalues at a zero `p` of `X`, the numerator being
/// the eigenvalue closest to `dP/dz`.
pub fn eigenratio<T: Real>(x: &PlaneField<T>, p: (Complex<T>, Complex<T>)) -> Result<EigenReport> {
    let (a, b) = x.eval(p.0, p.1);
    let size = a.norm().max(b.norm());
    if !(size <= T::lit(ZERO_TOL)) {
        return Err(Error::Domain(format!(
            "field does not vanish at ({}, {}): |X| = {:e}",
            fmt_cx(p.0),
            fmt_cx(p.1),
            to_f64(size)
        )));
    }
    let j = x.jacobian(p.0, p.1);
    let scale = j.iter().flatten().fold(T::zero(), |m, c| m.max(c.norm()));
    let [e1, e2] = paired_eigenvalues(j);
    let tiny = T::lit(1e-12) * scale.max(T::min_positive_value());
    if e1.norm() <= tiny || e2.norm() <= tiny {
        return Err(Error::Degenerate(format!(
            "zero eigenvalue at ({}, {})",
            fmt_cx(p.0),
            fmt_cx(p.1)
        )));
    }
    let l = e1 / e2;
    let lambda = Complex::new(to_f64(l.re), to_f64(l.im));
    let (class, rational) = classify_ratio(lambda);
    let c = |z: Complex<T>| Complex::new(to_f64(z.re), to_f64(z.im));
    Ok(EigenReport { lambda, eigenvalues: [c(e1), c(e2)], rational, class })
}

/// `lambda` and `1/lambda` describe the same linearization up to relabeling.
pub fn same_ratio(a: Complex<f64>, b: Complex<f64>, tol: f64) -> bool {
    let d1 = (a - b).norm() / a.norm().max(1.0);
    let d2 = (a * b - 1.0).norm() / a.norm().max(1.0);
    d1 <= tol || d2 <= tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entire_expr::EntireExpr;
    use crate::complex_poly::Poly;

    #[test]
    fn reconstruction() {
        assert_eq!(rational_reconstruct(2.0 / 3.0, 64, 1e-9), Some((2, 3)));
        assert_eq!(rational_reconstruct(-0.25, 64, 1e-9), Some((-1, 4)));
        assert_eq!(rational_reconstruct(5.0, 64, 1e-9), Some((5, 1)));
        assert_eq!(rational_reconstruct(std::f64::consts::SQRT_2, 64, 1e-9), None);
        assert_eq!(rational_reconstruct(1.0 / 67.0, 64, 1e-9), None);
    }

    #[test]
    fn linear_field_with_imaginary_ratio() {
        // x d/dx + i y d/dy
        let x = PlaneField::new(
            vec![EntireExpr::var()],
            vec![EntireExpr::zero(), EntireExpr::constant(Complex::new(0.0, 1.0))],
        );
        let r = eigenratio(&x, (Complex::new(0.0, 0.0), Complex::new(0.0, 0.0))).unwrap();
        // numerator pairs with dP/dz, so the ratio is 1/i
        assert!((r.lambda - Complex::new(0.0, -1.0)).norm() < 1e-15);
        assert!(same_ratio(r.lambda, Complex::new(0.0, 1.0), 1e-15));
        assert_eq!(r.class, EigenClass::NonRealTypeC);
    }

    #[test]
    fn errors() {
        let x = PlaneField::<f64>::new(vec![EntireExpr::var()], vec![EntireExpr::zero(), EntireExpr::one()]);
        assert!(matches!(eigenratio(&x, (Complex::new(1.0, 0.0), Complex::new(0.0, 0.0))), Err(Error::Domain(_))));
        let y = PlaneField::<f64>::new(vec![EntireExpr::var()], vec![EntireExpr::poly(Poly::from_reals(&[0.0, 0.0, 1.0]))]);
        assert!(matches!(eigenratio(&y, (Complex::new(0.0, 0.0), Complex::new(0.0, 0.0))), Err(Error::Degenerate(_))));
    }
}
