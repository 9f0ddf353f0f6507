use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cvector::{phase_function, CVector};
use crate::error::{precondition, Error};
use crate::exponent::Exponent;
use crate::linalg::CMatrix;
use crate::norm::{AbsoluteNorm, GramNorm};
use crate::sampling::gaussian_vec;

use super::{
    certify, reduce, reduced_to_original, Field, Method, NormCertificate, OperatorSpec,
    SearchConfig,
};

/// Unweighted p-norm of a modulus vector, max-rescaled.
pub(crate) fn cnorm(moduli: &[f64], p: Exponent) -> f64 {
    let scale = moduli.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    match p {
        Exponent::Inf => scale,
        Exponent::Finite(p) => {
            let sum: f64 = moduli.iter().map(|v| (v.abs() / scale).powf(p)).sum();
            scale * sum.powf(1.0 / p)
        }
    }
}

fn apply(b: &CMatrix, re: &[f64], im: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let (m, n) = (b.rows(), b.cols());
    let mut yr = vec![0.0; m];
    let mut yi = vec![0.0; m];
    for i in 0..m {
        let mut ar = 0.0;
        let mut ai = 0.0;
        for j in 0..n {
            let (br, bi) = (b.re_at(i, j), b.im_at(i, j));
            ar += br * re[j] - bi * im[j];
            ai += br * im[j] + bi * re[j];
        }
        yr[i] = ar;
        yi[i] = ai;
    }
    (yr, yi)
}

fn moduli(re: &[f64], im: &[f64]) -> Vec<f64> {
    re.iter().zip(im).map(|(&a, &b)| a.hypot(b)).collect()
}

fn ratio(b: &CMatrix, re: &[f64], im: &[f64], p: Exponent, q: Exponent) -> Option<f64> {
    let den = cnorm(&moduli(re, im), p);
    if den == 0.0 {
        return None;
    }
    let (yr, yi) = apply(b, re, im);
    Some(cnorm(&moduli(&yr, &yi), q) / den)
}

/// Gradient exponent: nonsmooth ends are replaced by nearby smooth ones;
/// the line search always scores the true objective, so smoothing only
/// shapes directions, never values.
fn effective(p: Exponent, eps: f64) -> f64 {
    match p {
        Exponent::Inf => 1.0 / eps,
        Exponent::Finite(p) if p <= 1.0 => 1.0 + eps,
        Exponent::Finite(p) => p,
    }
}

/// Ambient gradient of `log(||B u||_q_eff / ||u||_p_eff)`; `None` when the
/// image vanishes (plateau the ascent cannot use).
fn grad_log_ratio(
    b: &CMatrix,
    re: &[f64],
    im: &[f64],
    complex: bool,
    p_eff: f64,
    q_eff: f64,
) -> Option<Vec<f64>> {
    let (m, n) = (b.rows(), b.cols());
    let (yr, yi) = apply(b, re, im);
    let my = moduli(&yr, &yi);
    let mu = moduli(re, im);
    let ymax = my.iter().fold(0.0f64, |a, &v| a.max(v));
    let umax = mu.iter().fold(0.0f64, |a, &v| a.max(v));
    if ymax == 0.0 || umax == 0.0 {
        return None;
    }
    let sy: f64 = my.iter().map(|&v| (v / ymax).powf(q_eff)).sum();
    let su: f64 = mu.iter().map(|&v| (v / umax).powf(p_eff)).sum();
    let mut g = vec![0.0; if complex { 2 * n } else { n }];
    for i in 0..m {
        if my[i] == 0.0 {
            continue;
        }
        let wy = (my[i] / ymax).powf(q_eff - 1.0) / (ymax * sy);
        for j in 0..n {
            let (br, bi) = (b.re_at(i, j), b.im_at(i, j));
            g[j] += wy * (yr[i] * br + yi[i] * bi) / my[i];
            if complex {
                g[n + j] += wy * (-yr[i] * bi + yi[i] * br) / my[i];
            }
        }
    }
    for j in 0..n {
        if mu[j] == 0.0 {
            continue;
        }
        let wu = (mu[j] / umax).powf(p_eff - 1.0) / (umax * su);
        g[j] -= wu * re[j] / mu[j];
        if complex {
            g[n + j] -= wu * im[j] / mu[j];
        }
    }
    Some(g)
}

struct Ascended {
    re: Vec<f64>,
    im: Vec<f64>,
    value: f64,
    converged: bool,
}

fn euclid(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn renormalize(re: &mut [f64], im: &mut [f64]) {
    let s = (euclid(re).powi(2) + euclid(im).powi(2)).sqrt();
    if s > 0.0 {
        re.iter_mut().for_each(|v| *v /= s);
        im.iter_mut().for_each(|v| *v /= s);
    }
}

/// Gradient ascent with backtracking on the true ratio; monotone across
/// accepted iterations by construction.
fn ascend(
    b: &CMatrix,
    re0: &[f64],
    im0: &[f64],
    complex: bool,
    p: Exponent,
    q: Exponent,
    cfg: &SearchConfig,
) -> Option<Ascended> {
    let n = b.cols();
    let mut re = re0.to_vec();
    let mut im = if complex {
        im0.to_vec()
    } else {
        vec![0.0; n]
    };
    renormalize(&mut re, &mut im);
    let mut value = ratio(b, &re, &im, p, q)?;
    let p_eff = effective(p, cfg.smoothing_epsilon);
    let q_eff = effective(q, cfg.smoothing_epsilon);
    let mut step = 0.5;
    let mut small_streak = 0usize;
    let mut converged = false;
    for _ in 0..cfg.max_iters {
        let g = match grad_log_ratio(b, &re, &im, complex, p_eff, q_eff) {
            Some(g) => g,
            None => {
                converged = true;
                break;
            }
        };
        let gn = euclid(&g);
        if gn < 1e-15 {
            converged = true;
            break;
        }
        let mut accepted = false;
        let mut s = step;
        while s >= cfg.step_tolerance {
            let mut cre = re.clone();
            let mut cim = im.clone();
            for j in 0..n {
                cre[j] += s * g[j] / gn;
                if complex {
                    cim[j] += s * g[n + j] / gn;
                }
            }
            if let Some(v) = ratio(b, &cre, &cim, p, q) {
                if v > value {
                    let gain = (v - value) / value.max(1e-300);
                    renormalize(&mut cre, &mut cim);
                    re = cre;
                    im = cim;
                    value = v;
                    step = (s * 2.0).min(2.0);
                    accepted = true;
                    if gain < cfg.value_tolerance {
                        small_streak += 1;
                    } else {
                        small_streak = 0;
                    }
                    break;
                }
            }
            s *= 0.5;
        }
        if !accepted || small_streak >= 3 {
            converged = true;
            break;
        }
    }
    Some(Ascended {
        re,
        im,
        value,
        converged,
    })
}

/// Best sign vertex for a sup-norm source: exhaustive for n <= 12 (the
/// real inf -> q norm is attained at a vertex, so this is exact there),
/// greedy sign flips from `seed_signs` otherwise.
fn vertex_enumerate(b: &CMatrix, q: Exponent, seed_signs: Option<&[f64]>) -> (Vec<f64>, f64) {
    let n = b.cols();
    let score = |signs: &[f64]| -> f64 {
        let (yr, yi) = apply(b, signs, &vec![0.0; n]);
        cnorm(&moduli(&yr, &yi), q)
    };
    if n <= 12 {
        let mut best_signs = vec![1.0; n];
        let mut best = score(&best_signs);
        for mask in 0u32..(1u32 << (n - 1)) {
            let mut signs = vec![1.0; n];
            for (j, s) in signs.iter_mut().enumerate().skip(1) {
                if mask & (1 << (j - 1)) != 0 {
                    *s = -1.0;
                }
            }
            let v = score(&signs);
            if v > best {
                best = v;
                best_signs = signs;
            }
        }
        (best_signs, best)
    } else {
        let mut signs: Vec<f64> = match seed_signs {
            Some(s) => s.iter().map(|&v| if v < 0.0 { -1.0 } else { 1.0 }).collect(),
            None => vec![1.0; n],
        };
        let mut best = score(&signs);
        for _ in 0..100 {
            let mut improved = false;
            for j in 0..n {
                signs[j] = -signs[j];
                let v = score(&signs);
                if v > best {
                    best = v;
                    improved = true;
                } else {
                    signs[j] = -signs[j];
                }
            }
            if !improved {
                break;
            }
        }
        (signs, best)
    }
}

fn golden_max<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let gr = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut c = b - gr * (b - a);
    let mut d = a + gr * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..iters {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let v = f(x);
    (x, v)
}

/// Cyclic coordinate ascent over entry phases for a complex sup-norm
/// source: the optimum sits on the torus of unimodular entries.
fn phase_ascent(b: &CMatrix, q: Exponent, theta0: &[f64]) -> (Vec<f64>, Vec<f64>, f64) {
    let n = b.cols();
    let mut theta = theta0.to_vec();
    let eval = |theta: &[f64]| -> f64 {
        let re: Vec<f64> = theta.iter().map(|t| t.cos()).collect();
        let im: Vec<f64> = theta.iter().map(|t| t.sin()).collect();
        let (yr, yi) = apply(b, &re, &im);
        cnorm(&moduli(&yr, &yi), q)
    };
    let mut value = eval(&theta);
    const COARSE: usize = 64;
    for _ in 0..60 {
        let before = value;
        for j in 0..n {
            let base = theta[j];
            let mut best_t = base;
            let mut best_v = value;
            for k in 0..COARSE {
                let t = base + 2.0 * PI * k as f64 / COARSE as f64;
                let mut th = theta.clone();
                th[j] = t;
                let v = eval(&th);
                if v > best_v {
                    best_v = v;
                    best_t = t;
                }
            }
            let width = 2.0 * PI / COARSE as f64;
            let (t_ref, v_ref) = golden_max(
                |t| {
                    let mut th = theta.clone();
                    th[j] = t;
                    eval(&th)
                },
                best_t - width,
                best_t + width,
                40,
            );
            if v_ref > best_v {
                best_v = v_ref;
                best_t = t_ref;
            }
            if best_v > value {
                theta[j] = best_t;
                value = best_v;
            }
        }
        if value - before <= 1e-13 * (1.0 + value) {
            break;
        }
    }
    let re: Vec<f64> = theta.iter().map(|t| t.cos()).collect();
    let im: Vec<f64> = theta.iter().map(|t| t.sin()).collect();
    (re, im, value)
}

/// Hoelder attainers of every row, used as structured starts when the
/// target is a sup norm.
fn row_dual_starts(b: &CMatrix, p: Exponent) -> Vec<(Vec<f64>, Vec<f64>)> {
    let (m, n) = (b.rows(), b.cols());
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let mut re = vec![0.0; n];
        let mut im = vec![0.0; n];
        for j in 0..n {
            let (br, bi) = (b.re_at(i, j), b.im_at(i, j));
            let r = br.hypot(bi);
            if r == 0.0 {
                continue;
            }
            let mag = match p {
                Exponent::Inf => 1.0,
                Exponent::Finite(p) if p > 1.0 => r.powf(1.0 / (p - 1.0)),
                Exponent::Finite(_) => 1.0,
            };
            re[j] = mag * br / r;
            im[j] = -mag * bi / r;
        }
        out.push((re, im));
    }
    out
}

fn map_extra_start(x: &CVector, d1: &[f64], complex: bool) -> Option<(Vec<f64>, Vec<f64>)> {
    if x.len() != d1.len() {
        debug_assert!(false, "extra start has wrong length");
        return None;
    }
    let re: Vec<f64> = x.re().iter().zip(d1).map(|(v, d)| v * d).collect();
    let im: Vec<f64> = x.im().iter().zip(d1).map(|(v, d)| v * d).collect();
    if complex {
        Some((re, im))
    } else if re.iter().any(|v| *v != 0.0) {
        Some((re, vec![0.0; d1.len()]))
    } else {
        let m: Vec<f64> = re.iter().zip(&im).map(|(&a, &b)| a.hypot(b)).collect();
        Some((m, vec![0.0; d1.len()]))
    }
}

pub fn opnorm_search(spec: &OperatorSpec, field: Field, cfg: &SearchConfig) -> NormCertificate {
    opnorm_search_with_starts(spec, field, cfg, &[])
}

/// Multistart ascent seeded with basis vectors, structured candidates,
/// caller-provided warm starts, and `cfg.restarts` Gaussian draws (restart
/// k uses seed + k). Best value wins; ties keep the earliest start.
pub fn opnorm_search_with_starts(
    spec: &OperatorSpec,
    field: Field,
    cfg: &SearchConfig,
    extra_starts: &[CVector],
) -> NormCertificate {
    let red = reduce(spec);
    let b = &red.b;
    let n = b.cols();
    let complex = field == Field::Complex;
    let p = spec.source_p();
    let q = spec.target_q();

    if b.re().iter().all(|v| *v == 0.0) && b.im().iter().all(|v| *v == 0.0) {
        let e1 = CVector::real((0..n).map(|j| if j == 0 { 1.0 } else { 0.0 }).collect());
        return certify(spec, field, Method::Ascent, true, e1);
    }

    let mut starts: Vec<(Vec<f64>, Vec<f64>)> = Vec::new();
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        starts.push((e, vec![0.0; n]));
    }
    starts.push((vec![1.0; n], vec![0.0; n]));
    starts.push((
        (0..n).map(|j| if j % 2 == 0 { 1.0 } else { -1.0 }).collect(),
        vec![0.0; n],
    ));
    if complex && n >= 2 {
        let mut re = vec![0.0; n];
        let mut im = vec![0.0; n];
        re[0] = 1.0;
        im[1] = 1.0;
        starts.push((re, im));
        starts.push((
            vec![1.0; n],
            (0..n).map(|j| if j % 2 == 0 { 1.0 } else { -1.0 }).collect(),
        ));
    }
    if q == Exponent::Inf {
        for (re, im) in row_dual_starts(b, p) {
            if complex {
                starts.push((re, im));
            } else if re.iter().any(|v| *v != 0.0) {
                starts.push((re, vec![0.0; n]));
            }
        }
    }
    for x in extra_starts {
        if let Some(s) = map_extra_start(x, &red.d1, complex) {
            starts.push(s);
        }
    }
    for k in 0..cfg.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed.wrapping_add(k as u64));
        let re = gaussian_vec(&mut rng, n);
        let im = if complex {
            gaussian_vec(&mut rng, n)
        } else {
            vec![0.0; n]
        };
        starts.push((re, im));
    }

    let mut best: Option<Ascended> = None;
    for (re0, im0) in &starts {
        if let Some(run) = ascend(b, re0, im0, complex, p, q, cfg) {
            if best.as_ref().is_none_or(|cur| run.value > cur.value) {
                best = Some(run);
            }
        }
    }
    let mut best = best.unwrap_or(Ascended {
        re: {
            let mut e = vec![0.0; n];
            e[0] = 1.0;
            e
        },
        im: vec![0.0; n],
        value: 0.0,
        converged: true,
    });

    if p == Exponent::Inf {
        match field {
            Field::Real => {
                let (signs, v) = vertex_enumerate(b, q, Some(&best.re));
                if v > best.value || n <= 12 {
                    // exhaustive enumeration is exact for n <= 12
                    best = Ascended {
                        re: signs,
                        im: vec![0.0; n],
                        value: v,
                        converged: true,
                    };
                }
            }
            Field::Complex => {
                let witness = CVector::new(best.re.clone(), best.im.clone()).expect("lengths");
                let theta0 = phase_function(&witness);
                let (re, im, v) = phase_ascent(b, q, &theta0);
                if v > best.value {
                    best = Ascended {
                        re,
                        im,
                        value: v,
                        converged: true,
                    };
                }
                let (signs, _) = vertex_enumerate(b, q, None);
                let theta1: Vec<f64> = signs
                    .iter()
                    .map(|&s| if s < 0.0 { PI } else { 0.0 })
                    .collect();
                let (re, im, v) = phase_ascent(b, q, &theta1);
                if v > best.value {
                    best = Ascended {
                        re,
                        im,
                        value: v,
                        converged: true,
                    };
                }
            }
        }
    }

    let witness = reduced_to_original(&red, &best.re, &best.im);
    let witness = match field {
        Field::Real => witness.real_part(),
        Field::Complex => witness,
    };
    certify(spec, field, Method::Ascent, best.converged, witness)
}

/// A norm on the complexification, seen through (re, im) parts. The
/// general operator-norm search only needs evaluation.
pub trait ComplexNorm {
    fn dim(&self) -> usize;
    fn eval_parts(&self, re: &[f64], im: &[f64]) -> Result<f64, Error>;
}

/// An absolute norm pinned to a dimension.
#[derive(Debug, Clone)]
pub struct SizedAbsolute {
    pub norm: AbsoluteNorm,
    pub dim: usize,
}

impl SizedAbsolute {
    pub fn new(norm: AbsoluteNorm, dim: usize) -> Result<Self, Error> {
        if let Some(d) = norm.dim() {
            if d != dim {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: dim,
                });
            }
        }
        Ok(SizedAbsolute { norm, dim })
    }
}

impl ComplexNorm for SizedAbsolute {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval_parts(&self, re: &[f64], im: &[f64]) -> Result<f64, Error> {
        self.norm.eval_moduli(&moduli(re, im))
    }
}

impl ComplexNorm for GramNorm {
    fn dim(&self) -> usize {
        GramNorm::dim(self)
    }

    fn eval_parts(&self, re: &[f64], im: &[f64]) -> Result<f64, Error> {
        let a = self.eval_real(re)?;
        let b = self.eval_real(im)?;
        Ok(a.hypot(b))
    }
}

fn pattern_ascend<F: Fn(&[f64], &[f64]) -> Option<f64>>(
    f: &F,
    n: usize,
    re0: &[f64],
    im0: &[f64],
    complex: bool,
    cfg: &SearchConfig,
) -> Option<(Vec<f64>, Vec<f64>, f64, bool)> {
    let mut re = re0.to_vec();
    let mut im = if complex { im0.to_vec() } else { vec![0.0; n] };
    renormalize(&mut re, &mut im);
    let mut value = f(&re, &im)?;
    let mut step = 0.5;
    let mut iters = 0usize;
    while step >= cfg.step_tolerance && iters < cfg.max_iters * 4 {
        iters += 1;
        let mut best_cand: Option<(Vec<f64>, Vec<f64>, f64)> = None;
        for coord in 0..(if complex { 2 * n } else { n }) {
            for sgn in [1.0, -1.0] {
                let mut cre = re.clone();
                let mut cim = im.clone();
                if coord < n {
                    cre[coord] += sgn * step;
                } else {
                    cim[coord - n] += sgn * step;
                }
                if let Some(v) = f(&cre, &cim) {
                    if v > value && best_cand.as_ref().is_none_or(|(_, _, bv)| v > *bv) {
                        best_cand = Some((cre, cim, v));
                    }
                }
            }
        }
        match best_cand {
            Some((cre, cim, v)) => {
                re = cre;
                im = cim;
                renormalize(&mut re, &mut im);
                value = f(&re, &im).unwrap_or(v);
                step = (step * 1.5).min(1.0);
            }
            None => step *= 0.5,
        }
    }
    let converged = step < cfg.step_tolerance;
    Some((re, im, value, converged))
}

/// Operator norm between arbitrary complexification norms via multistart
/// derivative-free ascent. Slower than the `l_p` path but agnostic to the
/// norm structure; warm starts carry the known witnesses in.
pub fn opnorm_general(
    a: &CMatrix,
    source: &dyn ComplexNorm,
    target: &dyn ComplexNorm,
    field: Field,
    cfg: &SearchConfig,
    extra_starts: &[CVector],
) -> Result<NormCertificate, Error> {
    if source.dim() != a.cols() {
        return Err(Error::DimensionMismatch {
            expected: a.cols(),
            got: source.dim(),
        });
    }
    if target.dim() != a.rows() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            got: target.dim(),
        });
    }
    let n = a.cols();
    let complex = field == Field::Complex;
    let objective = |re: &[f64], im: &[f64]| -> Option<f64> {
        let src = source.eval_parts(re, im).ok()?;
        if src == 0.0 {
            return None;
        }
        let (yr, yi) = apply(a, re, im);
        let tgt = target.eval_parts(&yr, &yi).ok()?;
        Some(tgt / src)
    };

    let mut starts: Vec<(Vec<f64>, Vec<f64>)> = Vec::new();
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        starts.push((e, vec![0.0; n]));
    }
    starts.push((vec![1.0; n], vec![0.0; n]));
    starts.push((
        (0..n).map(|j| if j % 2 == 0 { 1.0 } else { -1.0 }).collect(),
        vec![0.0; n],
    ));
    for x in extra_starts {
        if x.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: x.len(),
            });
        }
        if complex {
            starts.push((x.re().to_vec(), x.im().to_vec()));
        } else if x.re().iter().any(|v| *v != 0.0) {
            starts.push((x.re().to_vec(), vec![0.0; n]));
        } else {
            starts.push((x.modulus(), vec![0.0; n]));
        }
    }
    for k in 0..cfg.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed.wrapping_add(k as u64));
        let re = gaussian_vec(&mut rng, n);
        let im = if complex {
            gaussian_vec(&mut rng, n)
        } else {
            vec![0.0; n]
        };
        starts.push((re, im));
    }

    let mut best: Option<(Vec<f64>, Vec<f64>, f64, bool)> = None;
    for (re0, im0) in &starts {
        if let Some(run) = pattern_ascend(&objective, n, re0, im0, complex, cfg) {
            if best.as_ref().is_none_or(|cur| run.2 > cur.2) {
                best = Some(run);
            }
        }
    }
    let (re, im, _, converged) = best.ok_or_else(|| precondition("no usable start point"))?;

    let src = source.eval_parts(&re, &im)?;
    if src == 0.0 {
        return Err(precondition("search collapsed to the null vector"));
    }
    let witness = CVector::new(
        re.iter().map(|v| v / src).collect(),
        im.iter().map(|v| v / src).collect(),
    )?;
    let (yr, yi) = apply(a, witness.re(), witness.im());
    let value = target.eval_parts(&yr, &yi)?;
    Ok(NormCertificate {
        value,
        witness,
        field,
        method: Method::PatternSearch,
        converged,
    })
}
