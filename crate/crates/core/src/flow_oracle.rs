//! Adaptive Dormand–Prince 5(4) integration of holomorphic ODEs in complex
//! time along polylines.
//!
//! A segment from `t_a` to `t_b` is parametrized by `tau in [0, 1]`, so the
//! integrated system is `dp/dtau = (t_b - t_a) X(p)`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{czero, to_f64, Real};

pub type State<T> = (Complex<T>, Complex<T>);

/// Smallest admissible step in `tau` (segment-length units).
pub const MIN_STEP: f64 = 1e-14;

// Dormand & Prince (1980), exact rationals.
const C: [(i64, i64); 7] = [(0, 1), (1, 5), (3, 10), (4, 5), (8, 9), (1, 1), (1, 1)];
const A: [[(i64, i64); 6]; 7] = [
    [(0, 1), (0, 1), (0, 1), (0, 1), (0, 1), (0, 1)],
    [(1, 5), (0, 1), (0, 1), (0, 1), (0, 1), (0, 1)],
    [(3, 40), (9, 40), (0, 1), (0, 1), (0, 1), (0, 1)],
    [(44, 45), (-56, 15), (32, 9), (0, 1), (0, 1), (0, 1)],
    [(19372, 6561), (-25360, 2187), (64448, 6561), (-212, 729), (0, 1), (0, 1)],
    [(9017, 3168), (-355, 33), (46732, 5247), (49, 176), (-5103, 18656), (0, 1)],
    [(35, 384), (0, 1), (500, 1113), (125, 192), (-2187, 6784), (11, 84)],
];
/// Fifth-order weights (equal to the last row of `A`: first same as last).
const B5: [(i64, i64); 7] =
    [(35, 384), (0, 1), (500, 1113), (125, 192), (-2187, 6784), (11, 84), (0, 1)];
/// Embedded fourth-order weights.
const B4: [(i64, i64); 7] = [
    (5179, 57600),
    (0, 1),
    (7571, 16695),
    (393, 640),
    (-92097, 339200),
    (187, 2100),
    (1, 40),
];

fn rat<T: Real>((n, d): (i64, i64)) -> T {
    T::lit(n as f64) / T::lit(d as f64)
}

/// Exposes the tableau for consistency tests.
pub fn tableau() -> ([(i64, i64); 7], [[(i64, i64); 6]; 7], [(i64, i64); 7], [(i64, i64); 7]) {
    (C, A, B5, B4)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct IntegrationSpec<T: Real> {
    pub rtol: T,
    pub atol: T,
    pub max_steps: usize,
    /// Time waypoints, starting at 0.
    pub path: Vec<Complex<T>>,
}

impl<T: Real> Default for IntegrationSpec<T> {
    fn default() -> Self {
        IntegrationSpec {
            rtol: T::lit(1e-10),
            atol: T::lit(1e-12),
            max_steps: 100_000,
            path: vec![czero()],
        }
    }
}

impl<T: Real> IntegrationSpec<T> {
    /// Straight segment from 0 to `t`.
    pub fn to(t: Complex<T>) -> Self {
        IntegrationSpec { path: vec![czero(), t], ..Default::default() }
    }

    /// Polyline through `waypoints`; a leading 0 is added when missing.
    pub fn along(waypoints: &[Complex<T>]) -> Self {
        let mut path = Vec::with_capacity(waypoints.len() + 1);
        if waypoints.first().is_none_or(|w| !w.norm().is_zero()) {
            path.push(czero());
        }
        path.extend_from_slice(waypoints);
        IntegrationSpec { path, ..Default::default() }
    }

    pub fn with_tolerances(mut self, rtol: T, atol: T) -> Self {
        self.rtol = rtol;
        self.atol = atol;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.rtol > T::zero() && self.atol > T::zero()) {
            return Err(Error::Invalid("integration tolerances must be positive".into()));
        }
        match self.path.first() {
            Some(t0) if t0.norm().is_zero() => Ok(()),
            _ => Err(Error::Invalid("integration path must start at t = 0".into())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Integration<T: Real> {
    pub end: State<T>,
    /// Sum of the accepted local error estimates.
    pub error_estimate: T,
    pub steps: usize,
}

fn finite<T: Real>(p: State<T>) -> bool {
    [p.0.re, p.0.im, p.1.re, p.1.im].iter().all(|x| x.is_finite())
}

struct Stage<T: Real> {
    k: [State<T>; 7],
}

/// One Dormand–Prince step of size `h` for `dp/dtau = d X(p)`; returns the
/// fifth-order update, the error vector and the stage values.
fn dp_step<T, F>(field: &F, d: Complex<T>, p: State<T>, k1: State<T>, h: T) -> (State<T>, State<T>, Stage<T>)
where
    T: Real,
    F: Fn(Complex<T>, Complex<T>) -> State<T>,
{
    let mut k = [k1; 7];
    for i in 1..7 {
        let mut z = p.0;
        let mut w = p.1;
        for j in 0..i {
            let a: T = rat(A[i][j]);
            if !a.is_zero() {
                z = z + k[j].0 * (h * a);
                w = w + k[j].1 * (h * a);
            }
        }
        let (fz, fw) = field(z, w);
        k[i] = (fz * d, fw * d);
    }
    let mut y5 = p;
    let mut err = (czero(), czero());
    for i in 0..7 {
        let b5: T = rat(B5[i]);
        let b4: T = rat(B4[i]);
        y5.0 = y5.0 + k[i].0 * (h * b5);
        y5.1 = y5.1 + k[i].1 * (h * b5);
        err.0 = err.0 + k[i].0 * (h * (b5 - b4));
        err.1 = err.1 + k[i].1 * (h * (b5 - b4));
    }
    (y5, err, Stage { k })
}

/// Integrates `p' = X(p)` from `p0` along `spec.path`.
pub fn integrate<T, F>(field: F, p0: State<T>, spec: &IntegrationSpec<T>) -> Result<Integration<T>>
where
    T: Real,
    F: Fn(Complex<T>, Complex<T>) -> State<T>,
{
    spec.validate()?;
    let mut p = p0;
    let mut steps = 0usize;
    let mut total_err = T::zero();
    let one = T::one();
    let min_step = T::lit(MIN_STEP);
    for (seg, pair) in spec.path.windows(2).enumerate() {
        let d = pair[1] - pair[0];
        if d.norm().is_zero() {
            continue;
        }
        let deriv = |p: State<T>| {
            let (a, b) = field(p.0, p.1);
            (a * d, b * d)
        };
        let mut tau = T::zero();
        let mut h = T::lit(0.01);
        let mut k1 = deriv(p);
        while tau < one {
            if steps >= spec.max_steps {
                return Err(Error::Numerical(format!(
                    "step budget of {} exhausted in segment {seg} at tau = {}",
                    spec.max_steps,
                    to_f64(tau)
                )));
            }
            if !finite(p) || !finite(k1) {
                return Err(Error::Escape { segment: seg, tau: to_f64(tau) });
            }
            let last = tau + h >= one;
            let hh = if last { one - tau } else { h };
            let (y, e, stage) = dp_step(&field, d, p, k1, hh);
            steps += 1;
            let sc0 = spec.atol + spec.rtol * p.0.norm().max(y.0.norm());
            let sc1 = spec.atol + spec.rtol * p.1.norm().max(y.1.norm());
            let ratio = (e.0.norm() / sc0).max(e.1.norm() / sc1);
            if ratio <= one && finite(y) {
                tau = if last { one } else { tau + hh };
                p = y;
                k1 = stage.k[6];
                total_err = total_err + e.0.norm().max(e.1.norm());
            }
            let factor = if ratio.is_finite() && ratio > T::zero() {
                (T::lit(0.9) * ratio.powf(T::lit(-0.2))).max(T::lit(0.2)).min(T::lit(5.0))
            } else if ratio.is_zero() {
                T::lit(5.0)
            } else {
                T::lit(0.2)
            };
            h = hh * factor;
            if tau < one && h < min_step {
                return Err(Error::Escape { segment: seg, tau: to_f64(tau) });
            }
        }
    }
    Ok(Integration { end: p, error_estimate: total_err, steps })
}

/// Fixed-step fifth-order integration with `n` steps per segment.
pub fn integrate_fixed<T, F>(field: F, p0: State<T>, path: &[Complex<T>], n: usize) -> State<T>
where
    T: Real,
    F: Fn(Complex<T>, Complex<T>) -> State<T>,
{
    let mut p = p0;
    let h = T::one() / T::from_usize_lossy(n.max(1));
    for pair in path.windows(2) {
        let d = pair[1] - pair[0];
        for _ in 0..n.max(1) {
            let (a, b) = field(p.0, p.1);
            p = dp_step(&field, d, p, (a * d, b * d), h).0;
        }
    }
    p
}

/// Distance between the start and the end of the flow along `path`.
pub fn monodromy_check<T, F>(field: F, p0: State<T>, path: &[Complex<T>]) -> Result<T>
where
    T: Real,
    F: Fn(Complex<T>, Complex<T>) -> State<T>,
{
    let spec = IntegrationSpec::along(path);
    let end = integrate(field, p0, &spec)?.end;
    Ok(((end.0 - p0.0).norm_sqr() + (end.1 - p0.1).norm_sqr()).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    #[test]
    fn tableau_rows_sum_to_nodes() {
        for i in 0..7 {
            let s: f64 = A[i].iter().map(|&q| rat::<f64>(q)).sum();
            assert!((s - rat::<f64>(C[i])).abs() < 1e-15);
        }
        let s5: f64 = B5.iter().map(|&q| rat::<f64>(q)).sum();
        let s4: f64 = B4.iter().map(|&q| rat::<f64>(q)).sum();
        assert!((s5 - 1.0).abs() < 1e-15 && (s4 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn exponential_growth() {
        let r = integrate(|_, w: Complex<f64>| (cx(0.0, 0.0), w), (cx(0.0, 0.0), cx(1.0, 0.0)), &IntegrationSpec::to(cx(1.0, 0.0)))
            .unwrap();
        assert!((r.end.1 - cx(std::f64::consts::E, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn riccati_before_and_at_blow_up() {
        let f = |_: Complex<f64>, w: Complex<f64>| (cx(0.0, 0.0), w * w);
        let p0 = (cx(0.0, 0.0), cx(1.0, 0.0));
        let r = integrate(f, p0, &IntegrationSpec::to(cx(0.5, 0.0))).unwrap();
        assert!((r.end.1 - cx(2.0, 0.0)).norm() < 1e-9);
        match integrate(f, p0, &IntegrationSpec::to(cx(1.0, 0.0))) {
            Err(Error::Escape { segment: 0, tau }) => assert!((0.99..=1.0).contains(&tau)),
            other => panic!("expected escape, got {other:?}"),
        }
    }

    #[test]
    fn path_must_start_at_zero() {
        let spec = IntegrationSpec::<f64> { path: vec![cx(1.0, 0.0)], ..Default::default() };
        assert!(integrate(|_, w: Complex<f64>| (w, w), (cx(0.0, 0.0), cx(1.0, 0.0)), &spec).is_err());
    }

    #[test]
    fn zero_field_has_no_displacement() {
        let d = monodromy_check(
            |_, _| (cx::<f64>(0.0, 0.0), cx(0.0, 0.0)),
            (cx(1.0, 0.0), cx(2.0, 0.0)),
            &[cx(1.0, 1.0), cx(0.0, 0.0)],
        )
        .unwrap();
        assert_eq!(d, 0.0);
    }
}
