//! Truncated power-series arithmetic on coefficient slices.
//!
//! Every routine returns exactly `n` coefficients (orders `0..n`), reading
//! missing input coefficients as zero.

use num_complex::Complex;

use crate::scalar::{binomial, czero, Real};

fn at<T: Real>(a: &[Complex<T>], k: usize) -> Complex<T> {
    a.get(k).copied().unwrap_or_else(czero)
}

pub fn add<T: Real>(a: &[Complex<T>], b: &[Complex<T>], n: usize) -> Vec<Complex<T>> {
    (0..n).map(|k| at(a, k) + at(b, k)).collect()
}

pub fn mul<T: Real>(a: &[Complex<T>], b: &[Complex<T>], n: usize) -> Vec<Complex<T>> {
    let mut out = vec![czero(); n];
    for (i, &ai) in a.iter().enumerate().take(n) {
        if ai.re.is_zero() && ai.im.is_zero() {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(n - i) {
            out[i + j] = out[i + j] + ai * bj;
        }
    }
    out
}

/// `a / b`; `None` when `b[0] == 0`.
pub fn div<T: Real>(a: &[Complex<T>], b: &[Complex<T>], n: usize) -> Option<Vec<Complex<T>>> {
    let b0 = at(b, 0);
    if b0.norm().is_zero() {
        return None;
    }
    let inv = b0.inv();
    let mut out: Vec<Complex<T>> = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = at(a, k);
        for j in 1..=k {
            acc = acc - at(b, j) * out[k - j];
        }
        out.push(acc * inv);
    }
    Some(out)
}

/// `exp(a)` via `b' = a' b`.
pub fn exp<T: Real>(a: &[Complex<T>], n: usize) -> Vec<Complex<T>> {
    let mut out: Vec<Complex<T>> = Vec::with_capacity(n);
    if n == 0 {
        return out;
    }
    out.push(at(a, 0).exp());
    for k in 1..n {
        let mut acc = czero();
        for j in 1..=k {
            acc = acc + at(a, j) * out[k - j] * T::from_usize_lossy(j);
        }
        out.push(acc / T::from_usize_lossy(k));
    }
    out
}

/// Principal-branch `log(a)`; `None` when `a[0] == 0`.
pub fn log<T: Real>(a: &[Complex<T>], n: usize) -> Option<Vec<Complex<T>>> {
    let a0 = at(a, 0);
    if a0.norm().is_zero() {
        return None;
    }
    if n == 0 {
        return Some(Vec::new());
    }
    let da: Vec<Complex<T>> = (1..n).map(|k| at(a, k) * T::from_usize_lossy(k)).collect();
    let ratio = div(&da, a, n.saturating_sub(1))?;
    let mut out = vec![a0.ln()];
    out.extend(ratio.iter().enumerate().map(|(k, &r)| r / T::from_usize_lossy(k + 1)));
    Some(out)
}

pub fn eval<T: Real>(a: &[Complex<T>], x: Complex<T>) -> Complex<T> {
    a.iter().rev().fold(czero(), |acc, &c| acc * x + c)
}

/// Re-expands `sum a_k x^k` around `x = delta`, truncated to `n` terms.
pub fn recenter<T: Real>(a: &[Complex<T>], delta: Complex<T>, n: usize) -> Vec<Complex<T>> {
    let mut out = vec![czero(); n];
    for (k, &ak) in a.iter().enumerate() {
        for (j, o) in out.iter_mut().enumerate().take(k + 1) {
            *o = *o + ak * delta.powu((k - j) as u32) * binomial::<T>(k, j);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    #[test]
    fn exp_then_log_is_identity() {
        let a = vec![cx::<f64>(0.2, 0.1), cx(1.0, 0.0), cx(-0.5, 0.3), cx(0.0, 0.25)];
        let e = exp(&a, 6);
        let l = log(&e, 6).unwrap();
        for k in 0..4 {
            assert!((l[k] - a[k]).norm() < 1e-13, "k={k}");
        }
        for v in &l[4..] {
            assert!(v.norm() < 1e-13);
        }
    }

    #[test]
    fn geometric_series_by_division() {
        let one = vec![cx::<f64>(1.0, 0.0)];
        let d = vec![cx(1.0, 0.0), cx(-1.0, 0.0)];
        let q = div(&one, &d, 4).unwrap();
        assert!(q.iter().all(|c| (*c - cx(1.0, 0.0)).norm() < 1e-15));
        assert!(div(&one, &[cx(0.0, 0.0)], 3).is_none());
    }
}
