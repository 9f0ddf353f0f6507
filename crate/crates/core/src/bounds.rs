//! The constant `c_X` and the bounds it produces.
//!
//! For a complexification norm, `c_X` is the supremum of
//! `(|Re x| + |Im x|) / |x|` over nonzero `x`; it controls how far the
//! complex operator norm can exceed the real one. For `l_p` the constant
//! is known in closed form; for arbitrary norms only lower bounds are
//! estimated by sampling. A pathological norm shows `c_X` is unbounded
//! over all complexification norms.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cvector::CVector;
use crate::engine::ComplexNorm;
use crate::error::{domain, precondition, Error};
use crate::exponent::Exponent;
use crate::measure::DiscreteMeasure;
use crate::pnorm::weighted_pnorm;
use crate::sampling::gaussian_cvector;

/// One part-versus-whole ratio measurement against the applicable bound.
#[derive(Debug, Clone)]
pub struct RatioReport {
    /// `(|Re x| + |Im x|) / |x|` in the `(p, mu)` norm.
    pub ratio: f64,
    /// `cx_lp(p)`, the sharp constant for this exponent.
    pub bound: f64,
    pub x: CVector,
    pub p: Exponent,
}

impl RatioReport {
    /// True when the measurement exceeds the bound beyond rounding slack.
    pub fn violates(&self) -> bool {
        self.ratio > self.bound + 1e-10
    }
}

/// Sharp `c_X` for weighted `l_p`: `sqrt(2)` on `[1,2]`, `2^(1-1/p)` on
/// `[2, inf)`, and `2` at the sup norm. Continuous at `p = 2`.
pub fn cx_lp(p: Exponent) -> f64 {
    match p {
        Exponent::Inf => 2.0,
        Exponent::Finite(p) if p <= 2.0 => 2.0_f64.sqrt(),
        Exponent::Finite(p) => 2.0_f64.powf(1.0 - 1.0 / p),
    }
}

/// Measure `(|Re x| + |Im x|) / |x|` against `cx_lp(p)`.
pub fn ratio_check(
    x: &CVector,
    p: Exponent,
    mu: &DiscreteMeasure,
) -> Result<RatioReport, Error> {
    let whole = weighted_pnorm(&x.modulus(), p, mu)?;
    if whole == 0.0 {
        return Err(domain("ratio is undefined at the zero vector"));
    }
    let re: Vec<f64> = x.re().iter().map(|v| v.abs()).collect();
    let im: Vec<f64> = x.im().iter().map(|v| v.abs()).collect();
    let ratio = (weighted_pnorm(&re, p, mu)? + weighted_pnorm(&im, p, mu)?) / whole;
    Ok(RatioReport {
        ratio,
        bound: cx_lp(p),
        x: x.clone(),
        p,
    })
}

/// `r |x_1 + i x_2| + |x_2|` on length-2 complex vectors. A genuine norm
/// on the complexification of `R^2`, but with `c_X >= r`: the two real
/// coordinates can hide inside the complex combination `x_1 + i x_2`.
pub fn pathological_norm(x: &CVector, r: f64) -> Result<f64, Error> {
    if x.len() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: x.len(),
        });
    }
    if !(r > 0.0) {
        return Err(domain("pathological norm needs r > 0"));
    }
    let (re, im) = (x.re(), x.im());
    // x_1 + i x_2 = (re0 - im1) + i (im0 + re1)
    let combined = (re[0] - im[1]).hypot(im[0] + re[1]);
    Ok(r * combined + re[1].hypot(im[1]))
}

/// `pathological_norm` packaged for the black-box estimator.
#[derive(Debug, Clone, Copy)]
pub struct PathologicalNorm {
    r: f64,
}

impl PathologicalNorm {
    pub fn new(r: f64) -> Result<Self, Error> {
        if !(r > 0.0) {
            return Err(domain("pathological norm needs r > 0"));
        }
        Ok(PathologicalNorm { r })
    }
}

impl ComplexNorm for PathologicalNorm {
    fn dim(&self) -> usize {
        2
    }

    fn eval_parts(&self, re: &[f64], im: &[f64]) -> Result<f64, Error> {
        let x = CVector::new(re.to_vec(), im.to_vec())?;
        pathological_norm(&x, self.r)
    }
}

fn part_ratio(norm: &dyn ComplexNorm, x: &CVector) -> Result<Option<f64>, Error> {
    let zeros = vec![0.0; x.len()];
    let whole = norm.eval_parts(x.re(), x.im())?;
    if whole == 0.0 {
        return Ok(None);
    }
    let re = norm.eval_parts(x.re(), &zeros)?;
    let im = norm.eval_parts(x.im(), &zeros)?;
    Ok(Some((re + im) / whole))
}

/// Lower-bound `c_X` for a black-box norm by maximizing the part ratio
/// over structured vectors plus `samples` Gaussian draws. The structured
/// set always contains the known `l_p` and pathological extremizers, so
/// those estimates are exact regardless of the random draws.
pub fn cx_estimate(norm: &dyn ComplexNorm, samples: usize, seed: u64) -> Result<f64, Error> {
    if samples == 0 {
        return Err(precondition("cx_estimate needs at least one sample"));
    }
    let n = norm.dim();
    let mut candidates: Vec<CVector> = Vec::new();
    let basis = |j: usize| -> Vec<f64> {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        e
    };
    for j in 0..n {
        // e_j and (1+i) e_j: real baseline and the equal-parts extremizer
        candidates.push(CVector::real(basis(j)));
        candidates.push(CVector::new(basis(j), basis(j))?);
    }
    for j in 0..n {
        for k in 0..n {
            if j == k {
                continue;
            }
            // e_j + i e_k: disjoint-support extremizer (and (1, i) itself)
            candidates.push(CVector::new(basis(j), basis(k))?);
            let mut neg = basis(k);
            neg[k] = -1.0;
            candidates.push(CVector::new(basis(j), neg)?);
            // e_j - e_k kept real: exercises sign structure
            let mut diff = basis(j);
            diff[k] = -1.0;
            candidates.push(CVector::real(diff));
        }
    }
    candidates.push(CVector::new(vec![1.0; n], vec![1.0; n])?);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        candidates.push(gaussian_cvector(&mut rng, n));
    }

    let mut best = 0.0f64;
    for x in &candidates {
        if let Some(r) = part_ratio(norm, x)? {
            if r > best {
                best = r;
            }
        }
    }
    Ok(best)
}

/// Jensen's inequality for the convex powers `t -> t^s`, `s >= 1`:
/// returns `((sum f w)^s, sum f^s w)`; the first never exceeds the
/// second beyond rounding.
pub fn jensen_check(f: &[f64], w: &[f64], s: f64) -> Result<(f64, f64), Error> {
    if f.len() != w.len() {
        return Err(Error::DimensionMismatch {
            expected: f.len(),
            got: w.len(),
        });
    }
    if s < 1.0 {
        return Err(precondition("convex power requires s >= 1"));
    }
    if f.iter().any(|v| *v < 0.0) {
        return Err(domain("jensen_check requires nonnegative samples"));
    }
    if w.iter().any(|v| *v < 0.0) {
        return Err(domain("jensen_check requires nonnegative weights"));
    }
    let total: f64 = w.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(domain("weights must sum to 1"));
    }
    let mean: f64 = f.iter().zip(w).map(|(a, b)| a * b).sum();
    let lhs = mean.powf(s);
    let rhs: f64 = f.iter().zip(w).map(|(a, b)| a.powf(s) * b).sum();
    if lhs > rhs + 1e-12 {
        return Err(domain("convexity violated: mean power exceeds power mean"));
    }
    Ok((lhs, rhs))
}
