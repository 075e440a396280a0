//! Seeded sampling of points in disks, shared by the verification suites.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::scalar::{cx, Real};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Region<T: Real> {
    pub center: Complex<T>,
    pub radius: T,
}

impl<T: Real> Default for Region<T> {
    fn default() -> Self {
        Region { center: cx(0.0, 0.0), radius: T::lit(3.0) }
    }
}

impl<T: Real> Region<T> {
    pub fn disk(center: Complex<T>, radius: T) -> Self {
        Region { center, radius }
    }

    pub fn contains(&self, z: Complex<T>) -> bool {
        (z - self.center).norm() <= self.radius
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct SampleSpec<T: Real> {
    pub count: usize,
    pub seed: u64,
    #[serde(default)]
    pub region: Region<T>,
}

impl<T: Real> SampleSpec<T> {
    pub fn new(count: usize, seed: u64) -> Self {
        SampleSpec { count, seed, region: Region::default() }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point in a disk.
pub fn point_in<T: Real, R: Rng>(rng: &mut R, region: &Region<T>) -> Complex<T> {
    let r: f64 = rng.gen::<f64>().sqrt();
    let theta: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
    region.center + Complex::from_polar(region.radius * T::lit(r), T::lit(theta))
}

/// Uniform point in the square `[-h, h]^2`.
pub fn point_in_square<T: Real, R: Rng>(rng: &mut R, h: f64) -> Complex<T> {
    cx(rng.gen_range(-h..=h), rng.gen_range(-h..=h))
}

/// `count` points of the region, skipping those rejected by `keep`.
pub fn points<T: Real>(spec: &SampleSpec<T>, keep: impl Fn(Complex<T>) -> bool) -> Vec<Complex<T>> {
    let mut r = rng(spec.seed);
    let mut out = Vec::with_capacity(spec.count);
    let mut tries = 0usize;
    while out.len() < spec.count && tries < 100 * spec.count.max(1) {
        tries += 1;
        let z = point_in(&mut r, &spec.region);
        if keep(z) {
            out.push(z);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_inside() {
        let spec = SampleSpec::<f64>::new(50, 7);
        let a = points(&spec, |_| true);
        let b = points(&spec, |_| true);
        assert_eq!(a, b);
        assert!(a.iter().all(|z| spec.region.contains(*z)));
    }
}
