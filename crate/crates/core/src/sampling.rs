use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::cvector::CVector;

/// Standard normal draws via Box-Muller; `rand_distr` is deliberately not
/// pulled in for two lines of math.
pub(crate) fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
}

pub(crate) fn gaussian_vec(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    (0..d).map(|_| gaussian(rng)).collect()
}

pub(crate) fn gaussian_cvector(rng: &mut ChaCha8Rng, n: usize) -> CVector {
    let re = gaussian_vec(rng, n);
    let im = gaussian_vec(rng, n);
    CVector::new(re, im).expect("equal lengths")
}
