//! Polynomial roots with multiplicities.
//!
//! Starting points are the eigenvalues of the companion matrix (shifted QR on
//! the Hessenberg form); Aberth–Ehrlich simultaneous iteration then polishes
//! them. Multiple roots come out of Aberth as tight clusters whose spread is
//! about `eps^(1/m)`; a cluster is merged only when the Taylor jet at its
//! centroid certifies an `m`-fold root, and the centroid is then refined with
//! Newton on `p^(m-1)`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::Poly;
use crate::error::{Error, Result};
use crate::scalar::{binomial, czero, Real};

/// Roots closer than this are always reported as one root.
pub const CLUSTER_DELTA: f64 = 1e-7;
/// Residual bound for reported roots, relative to the coefficient norm.
pub const ROOT_RESIDUAL: f64 = 1e-12;

/// Candidate radius (relative to `max(1, |z|)`) for gathering Aberth iterates
/// that might belong to one multiple root.
const CANDIDATE_RADIUS: f64 = 1e-3;
const MAX_ABERTH_ITERS: usize = 2000;
const MAX_QR_ITERS: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Root<T: Real> {
    pub value: Complex<T>,
    pub multiplicity: usize,
}

/// All roots of `p` with multiplicities summing to `deg p`, sorted by real
/// then imaginary part.
pub fn poly_roots<T: Real>(p: &Poly<T>) -> Result<Vec<Root<T>>> {
    let deg = match p.degree() {
        None | Some(0) => return Err(Error::NoRoots(p.degree().unwrap_or(0))),
        Some(d) => d,
    };
    if p.coeffs().iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::Numerical("non-finite polynomial coefficient".into()));
    }

    // exact zero roots first
    let zeros = p.coeffs().iter().take_while(|c| c.norm().is_zero()).count();
    let reduced = Poly::new(p.coeffs()[zeros..].to_vec());
    let mut roots = Vec::new();
    if zeros > 0 {
        roots.push(Root { value: czero(), multiplicity: zeros });
    }
    if zeros < deg {
        let simple = aberth(&reduced)?;
        roots.extend(certify_clusters(&reduced, simple));
    }
    roots.sort_by(|a, b| {
        a.value
            .re
            .partial_cmp(&b.value.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.value.im.partial_cmp(&b.value.im).unwrap_or(std::cmp::Ordering::Equal))
    });
    Ok(roots)
}

fn aberth<T: Real>(p: &Poly<T>) -> Result<Vec<Complex<T>>> {
    let n = p.degree().unwrap_or(0);
    if n == 1 {
        return Ok(vec![-p.coeff(0) / p.coeff(1)]);
    }
    let dp = p.derivative();
    let mut z = companion_eigenvalues(p).unwrap_or_else(|| circle_guesses(p));
    perturb_coincident(&mut z);

    let eps = T::epsilon();
    let four = T::lit(4.0);
    for _ in 0..MAX_ABERTH_ITERS {
        let mut done = true;
        for i in 0..n {
            let zi = z[i];
            let pv = p.eval(zi);
            if pv.norm() <= four * eps * p.eval_abs(zi) {
                continue;
            }
            let ratio = pv / dp.eval(zi);
            let mut sum = czero();
            for (j, &zj) in z.iter().enumerate() {
                if j != i {
                    sum = sum + (zi - zj).inv();
                }
            }
            let w = ratio / (Complex::new(T::one(), T::zero()) - ratio * sum);
            if !w.re.is_finite() || !w.im.is_finite() {
                return Err(Error::Numerical("Aberth iteration produced a non-finite step".into()));
            }
            z[i] = zi - w;
            if w.norm() > four * eps * zi.norm().max(T::min_positive_value()) {
                done = false;
            }
        }
        if done {
            return Ok(z);
        }
    }
    // Multiple roots stall at the rounding floor without meeting the step
    // criterion; accept when every residual is at rounding scale.
    let floor = T::lit(1e3) * eps;
    if z.iter().all(|&zi| p.eval(zi).norm() <= floor * p.eval_abs(zi)) {
        Ok(z)
    } else {
        Err(Error::Numerical(format!(
            "Aberth iteration did not converge for degree {n}"
        )))
    }
}

fn perturb_coincident<T: Real>(z: &mut [Complex<T>]) {
    let n = z.len();
    for i in 0..n {
        for j in 0..i {
            if (z[i] - z[j]).norm() <= T::epsilon() * (T::one() + z[i].norm()) {
                let nudge = T::lit(1e-6) * (T::one() + z[i].norm());
                let angle = T::lit(0.7 + i as f64);
                z[i] = z[i] + Complex::from_polar(nudge, angle);
            }
        }
    }
}

fn circle_guesses<T: Real>(p: &Poly<T>) -> Vec<Complex<T>> {
    let n = p.degree().unwrap_or(0);
    let lead = p.leading().norm();
    // Cauchy bound on the companion matrix spectrum
    let radius = p.coeffs()[..n]
        .iter()
        .fold(T::zero(), |m, c| m.max(c.norm() / lead))
        + T::one();
    (0..n)
        .map(|k| {
            let theta = T::TAU() * T::from_usize_lossy(k) / T::from_usize_lossy(n) + T::lit(0.4);
            Complex::from_polar(radius * T::lit(0.5), theta)
        })
        .collect()
}

/// Eigenvalues of the companion matrix of `p` by shifted Hessenberg QR.
fn companion_eigenvalues<T: Real>(p: &Poly<T>) -> Option<Vec<Complex<T>>> {
    let n = p.degree()?;
    let lead = p.leading();
    let mut h = vec![vec![czero::<T>(); n]; n];
    for i in 1..n {
        h[i][i - 1] = Complex::new(T::one(), T::zero());
    }
    for (i, row) in h.iter_mut().enumerate() {
        row[n - 1] = -p.coeff(i) / lead;
    }
    hessenberg_qr(h)
}

fn hessenberg_qr<T: Real>(mut h: Vec<Vec<Complex<T>>>) -> Option<Vec<Complex<T>>> {
    let eps = T::epsilon();
    let mut hi = h.len();
    let mut eig = Vec::with_capacity(hi);
    let mut iters = 0usize;
    while hi > 0 {
        if hi == 1 {
            eig.push(h[0][0]);
            break;
        }
        // deflation search
        let mut lo = hi - 1;
        while lo > 0 {
            let scale = h[lo][lo].norm() + h[lo - 1][lo - 1].norm();
            if h[lo][lo - 1].norm() <= eps * scale.max(T::min_positive_value()) {
                h[lo][lo - 1] = czero();
                break;
            }
            lo -= 1;
        }
        if lo == hi - 1 {
            eig.push(h[hi - 1][hi - 1]);
            hi -= 1;
            iters = 0;
            continue;
        }
        iters += 1;
        if iters > MAX_QR_ITERS {
            return None;
        }
        let shift = if iters.is_multiple_of(11) {
            // exceptional shift
            h[hi - 1][hi - 1] + Complex::new(h[hi - 1][hi - 2].norm(), h[hi - 1][hi - 2].norm())
        } else {
            wilkinson_shift(&h, hi)
        };
        qr_step(&mut h, lo, hi, shift);
    }
    if eig.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Some(eig)
    } else {
        None
    }
}

fn wilkinson_shift<T: Real>(h: &[Vec<Complex<T>>], hi: usize) -> Complex<T> {
    let a = h[hi - 2][hi - 2];
    let b = h[hi - 2][hi - 1];
    let c = h[hi - 1][hi - 2];
    let d = h[hi - 1][hi - 1];
    let half = T::lit(0.5);
    let tr = (a + d) * half;
    let disc = ((a - d) * (a - d) * T::lit(0.25) + b * c).sqrt();
    let m1 = tr + disc;
    let m2 = tr - disc;
    if (m1 - d).norm() < (m2 - d).norm() {
        m1
    } else {
        m2
    }
}

fn qr_step<T: Real>(h: &mut [Vec<Complex<T>>], lo: usize, hi: usize, shift: Complex<T>) {
    for k in lo..hi {
        h[k][k] = h[k][k] - shift;
    }
    let mut rotations = Vec::with_capacity(hi - lo);
    for k in lo..hi - 1 {
        let x = h[k][k];
        let y = h[k + 1][k];
        let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
        let (c, s) = if r.is_zero() {
            (Complex::new(T::one(), T::zero()), czero())
        } else {
            (x / r, y / r)
        };
        for j in k..hi {
            let a = h[k][j];
            let b = h[k + 1][j];
            h[k][j] = c.conj() * a + s.conj() * b;
            h[k + 1][j] = -s * a + c * b;
        }
        rotations.push((c, s));
    }
    for (idx, &(c, s)) in rotations.iter().enumerate() {
        let k = lo + idx;
        for row in h.iter_mut().take((k + 2).min(hi)).skip(lo) {
            let a = row[k];
            let b = row[k + 1];
            row[k] = a * c + b * s;
            row[k + 1] = -a * s.conj() + b * c.conj();
        }
    }
    for k in lo..hi {
        h[k][k] = h[k][k] + shift;
    }
}

/// Taylor coefficient bounds: `sum_k |a_k| C(k,j) |c|^(k-j)`, the rounding
/// scale of the `j`-th Taylor coefficient at `c`.
fn jet_scale<T: Real>(p: &Poly<T>, c: Complex<T>, j: usize) -> T {
    let r = c.norm();
    p.coeffs()
        .iter()
        .enumerate()
        .skip(j)
        .fold(T::zero(), |acc, (k, a)| {
            acc + a.norm() * binomial::<T>(k, j) * r.powi((k - j) as i32)
        })
}

fn certify_clusters<T: Real>(p: &Poly<T>, z: Vec<Complex<T>>) -> Vec<Root<T>> {
    let n = z.len();
    // union-find on the candidate radius
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        parent[i] = r;
        r
    }
    for i in 0..n {
        for j in 0..i {
            let scale = T::one().max(z[i].norm()).max(z[j].norm());
            if (z[i] - z[j]).norm() <= T::lit(CANDIDATE_RADIUS) * scale {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut label = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if label[r] == usize::MAX {
            label[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[label[r]].push(i);
    }

    let mut out = Vec::with_capacity(n);
    for g in groups {
        if g.len() == 1 {
            out.push(Root { value: z[g[0]], multiplicity: 1 });
            continue;
        }
        let m = g.len();
        let centroid =
            g.iter().fold(czero(), |acc, &i| acc + z[i]) / T::from_usize_lossy(m);
        let spread = g.iter().fold(T::zero(), |acc, &i| acc.max((z[i] - centroid).norm()));
        match certify_multiple(p, centroid, m) {
            Some(root) => out.push(Root { value: root, multiplicity: m }),
            None if spread <= T::lit(CLUSTER_DELTA) => {
                out.push(Root { value: centroid, multiplicity: m })
            }
            None => out.extend(g.iter().map(|&i| Root { value: z[i], multiplicity: 1 })),
        }
    }
    out
}

/// Refines `c` as an `m`-fold root and returns it if the jet confirms one.
fn certify_multiple<T: Real>(p: &Poly<T>, c: Complex<T>, m: usize) -> Option<Complex<T>> {
    let tol = T::lit(1e4) * T::epsilon();
    let mut c = c;
    for _ in 0..4 {
        let jet = p.jet(c, m);
        let lead = jet[m];
        if lead.norm().is_zero() {
            return None;
        }
        // Newton on p^(m-1): (p^(m-1)/(m-1)!)(c+x) = b_{m-1} + m b_m x + ...
        let step = jet[m - 1] / (lead * T::from_usize_lossy(m));
        c = c - step;
        if step.norm() <= T::epsilon() * (T::one() + c.norm()) {
            break;
        }
    }
    let jet = p.jet(c, m);
    let ok = (0..m).all(|j| jet[j].norm() <= tol * jet_scale(p, c, j));
    ok.then_some(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    type P = Poly<f64>;

    fn expand(roots: &[Root<f64>], lead: Complex<f64>) -> P {
        let mut acc = P::constant(lead);
        for r in roots {
            for _ in 0..r.multiplicity {
                acc = &acc * &P::from_roots(&[r.value]);
            }
        }
        acc
    }

    #[test]
    fn unit_imaginary_pair() {
        let r = poly_roots(&P::from_reals(&[1.0, 0.0, 1.0])).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[0].value - cx(0.0, -1.0)).norm() < 1e-14);
        assert!((r[1].value - cx(0.0, 1.0)).norm() < 1e-14);
        assert!(r.iter().all(|x| x.multiplicity == 1));
    }

    #[test]
    fn exact_double_zero() {
        let r = poly_roots(&P::from_reals(&[0.0, 0.0, 1.0])).unwrap();
        assert_eq!(r, vec![Root { value: cx(0.0, 0.0), multiplicity: 2 }]);
    }

    #[test]
    fn triple_root_clusters() {
        // (z-1)^3 expanded by hand
        let r = poly_roots(&P::from_reals(&[-1.0, 3.0, -3.0, 1.0])).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].multiplicity, 3);
        assert!((r[0].value - cx(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn constant_has_no_roots() {
        assert_eq!(poly_roots(&P::from_reals(&[2.0])), Err(Error::NoRoots(0)));
    }

    #[test]
    fn mixed_multiplicities_reconstruct() {
        let a = cx(0.3, 0.4);
        let b = cx(-0.7, 0.1);
        let mut p = P::from_roots(&[a, a, a, b, b, cx(1.5, -0.2)]);
        p = p.scale(cx(2.0, -1.0));
        let r = poly_roots(&p).unwrap();
        let total: usize = r.iter().map(|x| x.multiplicity).sum();
        assert_eq!(total, 6);
        assert_eq!(r.len(), 3);
        let back = expand(&r, p.leading());
        for k in 0..=6 {
            assert!((back.coeff(k) - p.coeff(k)).norm() <= 1e-8 * p.norm());
        }
    }

    #[test]
    fn close_but_distinct_roots_stay_apart() {
        let p = P::from_roots(&[cx(0.5, 0.0), cx(0.5 + 1e-4, 0.0), cx(-1.0, 0.0)]);
        let r = poly_roots(&p).unwrap();
        assert_eq!(r.len(), 3);
    }

    #[test]
    fn single_precision_instantiation() {
        let p = Poly::<f32>::from_reals(&[-2.0, 0.0, 1.0]);
        let r = poly_roots(&p).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[1].value.re - 2f32.sqrt()).abs() < 1e-5);
    }
}
