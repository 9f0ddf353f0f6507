use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::cvector::CVector;
use crate::error::{precondition, unsupported, Error};
use crate::exponent::Exponent;

use super::search::cnorm;
use super::{certify, reduce, reduced_to_original, Field, Method, NormCertificate, OperatorSpec};

/// `s^(e/2)` for `s = |y|^2 >= 0`, with branch-free shortcuts for the
/// exponents the fixtures hammer on.
#[inline]
fn pow_sq(s: f64, e: f64) -> f64 {
    if e == 2.0 {
        s
    } else if e == 1.0 {
        s.sqrt()
    } else if e == 4.0 {
        s * s
    } else if e == 3.0 {
        s * s.sqrt()
    } else if e == 1.5 {
        (s * s.sqrt()).sqrt()
    } else {
        s.powf(0.5 * e)
    }
}

struct Trig {
    cos: Vec<f64>,
    sin: Vec<f64>,
}

fn trig_nodes(count: usize, step: f64) -> Trig {
    let mut cos = Vec::with_capacity(count);
    let mut sin = Vec::with_capacity(count);
    for i in 0..count {
        let t = step * i as f64;
        cos.push(t.cos());
        sin.push(t.sin());
    }
    Trig { cos, sin }
}

/// Walk the spherical grid: `d - 1` polar angles over `[0, pi]`, one
/// azimuthal angle over `[0, 2 pi)`, prefix sine products carried down.
fn recurse<F: FnMut(&[f64])>(
    k: usize,
    d: usize,
    prefix: f64,
    x: &mut [f64],
    polar: &Trig,
    azim: &Trig,
    visit: &mut F,
) {
    let t = if k == d - 1 { azim } else { polar };
    for i in 0..t.cos.len() {
        x[k] = prefix * t.cos[i];
        let next = prefix * t.sin[i];
        if k + 1 == d {
            x[d] = next;
            visit(x);
        } else {
            recurse(k + 1, d, next, x, polar, azim, visit);
        }
    }
}

fn sphere_scan<F: FnMut(&[f64])>(vdim: usize, polar: &Trig, azim: &Trig, visit: &mut F) {
    let mut x = vec![0.0; vdim];
    if vdim == 1 {
        x[0] = 1.0;
        visit(&x);
        return;
    }
    recurse(0, vdim - 1, 1.0, &mut x, polar, azim, visit);
}

fn grid_points(vdim: usize, density: usize) -> f64 {
    if vdim <= 1 {
        1.0
    } else {
        let polar = density as f64 + 1.0;
        polar.powi(vdim as i32 - 2) * (2.0 * density as f64)
    }
}

fn vdim_for(field: Field, n: usize) -> usize {
    match field {
        Field::Real => n,
        // one global phase is quotiented out by pinning im(x_1) = 0
        Field::Complex => 2 * n - 1,
    }
}

/// Best ratio over a deterministic spherical grid. The reported value is a
/// true ratio, hence a lower bound; `oracle_resolution` bounds the gap to
/// the supremum. Real sources scan `S^(n-1)`, complex ones `S^(2n-2)`.
///
/// Dimension gate: `n <= 3` real, `n <= 2` complex. Use
/// `opnorm_oracle_override` to scan larger problems at your own cost.
pub fn opnorm_oracle(
    spec: &OperatorSpec,
    field: Field,
    density: usize,
) -> Result<NormCertificate, Error> {
    let n = spec.matrix().cols();
    let limit = match field {
        Field::Real => 3,
        Field::Complex => 2,
    };
    if n > limit {
        return Err(unsupported(
            "oracle is gated to n <= 3 real / n <= 2 complex; use the override",
        ));
    }
    oracle_impl(spec, field, density)
}

/// Same scan as `opnorm_oracle` without the dimension gate. Still refuses
/// grids whose point count would be astronomical.
pub fn opnorm_oracle_override(
    spec: &OperatorSpec,
    field: Field,
    density: usize,
) -> Result<NormCertificate, Error> {
    oracle_impl(spec, field, density)
}

fn oracle_impl(
    spec: &OperatorSpec,
    field: Field,
    density: usize,
) -> Result<NormCertificate, Error> {
    if density < 4 {
        return Err(precondition("oracle density must be at least 4"));
    }
    let red = reduce(spec);
    let b = &red.b;
    let (m, n) = (b.rows(), b.cols());
    let vdim = vdim_for(field, n);
    if grid_points(vdim, density) > 6.0e8 {
        return Err(precondition(
            "oracle grid exceeds 6e8 points; lower the density or dimension",
        ));
    }
    let step = PI / density as f64;
    let polar = trig_nodes(density + 1, step);
    let azim = trig_nodes(2 * density, step);

    let p = spec.source_p();
    let q = spec.target_q();
    let real_path = field == Field::Real && b.is_real();

    // log |Bx|_q - log |x|_p, or -inf when the image vanishes
    let br = b.re();
    let bi = b.im();
    let mut xre = vec![0.0; n];
    let mut xim = vec![0.0; n];
    let mut best: Option<(f64, Vec<f64>)> = None;
    {
        let mut visit = |v: &[f64]| {
            let score = if real_path {
                let mut sx_sum = 0.0;
                let mut sx_max = 0.0f64;
                for &vj in v.iter() {
                    let s = vj * vj;
                    match p {
                        Exponent::Finite(p) => sx_sum += pow_sq(s, p),
                        Exponent::Inf => sx_max = sx_max.max(s),
                    }
                }
                let mut sy_sum = 0.0;
                let mut sy_max = 0.0f64;
                for i in 0..m {
                    let mut a = 0.0;
                    let row = &br[i * n..(i + 1) * n];
                    for j in 0..n {
                        a += row[j] * v[j];
                    }
                    let s = a * a;
                    match q {
                        Exponent::Finite(q) => sy_sum += pow_sq(s, q),
                        Exponent::Inf => sy_max = sy_max.max(s),
                    }
                }
                let num = match q {
                    Exponent::Finite(q) if sy_sum > 0.0 => sy_sum.ln() / q,
                    Exponent::Inf if sy_max > 0.0 => 0.5 * sy_max.ln(),
                    _ => return,
                };
                let den = match p {
                    Exponent::Finite(p) => sx_sum.ln() / p,
                    Exponent::Inf => 0.5 * sx_max.ln(),
                };
                num - den
            } else {
                match field {
                    Field::Real => {
                        xre.copy_from_slice(v);
                        xim.iter_mut().for_each(|t| *t = 0.0);
                    }
                    Field::Complex => {
                        xre[0] = v[0];
                        xim[0] = 0.0;
                        for j in 1..n {
                            xre[j] = v[2 * j - 1];
                            xim[j] = v[2 * j];
                        }
                    }
                }
                let mut sx_sum = 0.0;
                let mut sx_max = 0.0f64;
                for j in 0..n {
                    let s = xre[j] * xre[j] + xim[j] * xim[j];
                    match p {
                        Exponent::Finite(p) => sx_sum += pow_sq(s, p),
                        Exponent::Inf => sx_max = sx_max.max(s),
                    }
                }
                let mut sy_sum = 0.0;
                let mut sy_max = 0.0f64;
                for i in 0..m {
                    let mut ar = 0.0;
                    let mut ai = 0.0;
                    for j in 0..n {
                        let (cr, ci) = (br[i * n + j], bi[i * n + j]);
                        ar += cr * xre[j] - ci * xim[j];
                        ai += cr * xim[j] + ci * xre[j];
                    }
                    let s = ar * ar + ai * ai;
                    match q {
                        Exponent::Finite(q) => sy_sum += pow_sq(s, q),
                        Exponent::Inf => sy_max = sy_max.max(s),
                    }
                }
                let num = match q {
                    Exponent::Finite(q) if sy_sum > 0.0 => sy_sum.ln() / q,
                    Exponent::Inf if sy_max > 0.0 => 0.5 * sy_max.ln(),
                    _ => return,
                };
                let den = match p {
                    Exponent::Finite(p) => sx_sum.ln() / p,
                    Exponent::Inf => 0.5 * sx_max.ln(),
                };
                num - den
            };
            if best.as_ref().is_none_or(|(bs, _)| score > *bs) {
                best = Some((score, v.to_vec()));
            }
        };
        sphere_scan(vdim, &polar, &azim, &mut visit);
    }

    let witness = match best {
        None => CVector::real((0..n).map(|j| if j == 0 { 1.0 } else { 0.0 }).collect()),
        Some((_, v)) => {
            let (re, im) = match field {
                Field::Real => (v.clone(), vec![0.0; n]),
                Field::Complex => {
                    let mut re = vec![0.0; n];
                    let mut im = vec![0.0; n];
                    re[0] = v[0];
                    for j in 1..n {
                        re[j] = v[2 * j - 1];
                        im[j] = v[2 * j];
                    }
                    (re, im)
                }
            };
            reduced_to_original(&red, &re, &im)
        }
    };
    Ok(certify(spec, field, Method::Oracle, true, witness))
}

/// Guaranteed bound on `sup ratio - oracle value` for the same density.
///
/// On the unit Euclidean sphere the ratio is `L`-Lipschitz with
/// `L = (M_q / m_p) (1 + k_p / m_p)` where `M_q` is the `q`-norm of the
/// row Euclidean norms and `m_p <= |x|_p <= k_p` compare `l_p` to `l_2`.
/// Every sphere point sits within `d * step / 2` of a grid node.
pub fn oracle_resolution(
    spec: &OperatorSpec,
    field: Field,
    density: usize,
) -> Result<f64, Error> {
    if density < 4 {
        return Err(precondition("oracle density must be at least 4"));
    }
    let red = reduce(spec);
    let b = &red.b;
    let (m, n) = (b.rows(), b.cols());
    let row_norms: Vec<f64> = (0..m)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let (cr, ci) = (b.re_at(i, j), b.im_at(i, j));
                    cr * cr + ci * ci
                })
                .sum::<f64>()
                .sqrt()
        })
        .collect();
    let mq = cnorm(&row_norms, spec.target_q());
    let inv_p = match spec.source_p() {
        Exponent::Inf => 0.0,
        Exponent::Finite(p) => 1.0 / p,
    };
    let t = (n as f64).powf(inv_p - 0.5);
    let mp = t.min(1.0);
    let kp = t.max(1.0);
    let l = (mq / mp) * (1.0 + kp / mp);
    let d = vdim_for(field, n) - 1;
    Ok(l * d as f64 * (PI / density as f64) / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{opnorm_exact, opnorm_search, SearchConfig};
    use crate::linalg::CMatrix;
    use crate::measure::DiscreteMeasure;
    use approx::assert_abs_diff_eq;

    fn two_by_two() -> CMatrix {
        CMatrix::from_rows(&[vec![1.0, -1.0], vec![1.0, 1.0]]).unwrap()
    }

    #[test]
    fn real_scan_brackets_the_sup_to_one_norm() {
        let spec = OperatorSpec::counting(two_by_two(), Exponent::Inf, Exponent::Finite(1.0));
        let density = 500;
        let cert = opnorm_oracle(&spec, Field::Real, density).unwrap();
        let res = oracle_resolution(&spec, Field::Real, density).unwrap();
        assert!(cert.value <= 2.0 + 1e-9, "grid ratios never exceed the norm");
        assert!(cert.value >= 2.0 - res, "found {} res {}", cert.value, res);
        assert!(cert.witness.is_real());
    }

    #[test]
    fn complex_scan_sees_past_the_real_norm() {
        let spec = OperatorSpec::counting(two_by_two(), Exponent::Inf, Exponent::Finite(1.0));
        let density = 150;
        let cert = opnorm_oracle(&spec, Field::Complex, density).unwrap();
        let res = oracle_resolution(&spec, Field::Complex, density).unwrap();
        let truth = 2.0 * 2.0_f64.sqrt();
        assert!(cert.value <= truth + 1e-9);
        assert!(cert.value >= truth - res);
        assert!(cert.value > 2.0 + 0.3, "complex grid must beat the real norm");
    }

    #[test]
    fn scan_brackets_the_spectral_norm() {
        let a = CMatrix::from_rows(&[vec![2.0, 1.0], vec![0.0, 1.0]]).unwrap();
        let sigma = a.sigma_max();
        let spec = OperatorSpec::counting(a, Exponent::Finite(2.0), Exponent::Finite(2.0));
        let density = 2000;
        let cert = opnorm_oracle(&spec, Field::Real, density).unwrap();
        let res = oracle_resolution(&spec, Field::Real, density).unwrap();
        assert!((cert.value - sigma).abs() <= res);
    }

    #[test]
    fn weighted_scan_matches_the_closed_form() {
        let a = CMatrix::from_rows(&[vec![1.0, 2.0], vec![-1.0, 1.0]]).unwrap();
        let spec = OperatorSpec::new(
            a,
            Exponent::Finite(2.0),
            Exponent::Finite(2.0),
            DiscreteMeasure::new(vec![2.0, 0.5]).unwrap(),
            DiscreteMeasure::new(vec![1.0, 3.0]).unwrap(),
        )
        .unwrap();
        let exact = opnorm_exact(&spec, Field::Real).unwrap();
        let density = 3000;
        let cert = opnorm_oracle(&spec, Field::Real, density).unwrap();
        let res = oracle_resolution(&spec, Field::Real, density).unwrap();
        assert!((cert.value - exact.value).abs() <= res);
    }

    #[test]
    fn zero_matrix_scans_to_zero() {
        let a = CMatrix::real(2, 2, vec![0.0; 4]).unwrap();
        let spec = OperatorSpec::counting(a, Exponent::Finite(3.0), Exponent::Finite(1.5));
        let cert = opnorm_oracle(&spec, Field::Real, 10).unwrap();
        assert_eq!(cert.value, 0.0);
    }

    #[test]
    fn one_by_one_scan_is_exact() {
        let a = CMatrix::real(1, 1, vec![-2.5]).unwrap();
        let spec = OperatorSpec::counting(a, Exponent::Finite(3.0), Exponent::Finite(1.5));
        let cert = opnorm_oracle(&spec, Field::Real, 10).unwrap();
        let res = oracle_resolution(&spec, Field::Real, 10).unwrap();
        assert_abs_diff_eq!(cert.value, 2.5, epsilon = 1e-15);
        assert_eq!(res, 0.0);
    }

    #[test]
    fn dimension_gate_and_override() {
        let a = CMatrix::real(1, 4, vec![1.0, -1.0, 0.5, 0.25]).unwrap();
        let spec = OperatorSpec::counting(a, Exponent::Finite(2.0), Exponent::Finite(2.0));
        assert!(matches!(
            opnorm_oracle(&spec, Field::Real, 10),
            Err(Error::Unsupported(_))
        ));
        let cert = opnorm_oracle_override(&spec, Field::Real, 8).unwrap();
        let res = oracle_resolution(&spec, Field::Real, 8).unwrap();
        let search = opnorm_search(&spec, Field::Real, &SearchConfig::default().with_restarts(8));
        assert!((cert.value - search.value).abs() <= res);
    }

    #[test]
    fn low_density_is_rejected() {
        let spec = OperatorSpec::counting(two_by_two(), Exponent::Inf, Exponent::Finite(1.0));
        assert!(matches!(
            opnorm_oracle(&spec, Field::Real, 3),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            oracle_resolution(&spec, Field::Real, 3),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn resolution_shrinks_with_density() {
        let spec = OperatorSpec::counting(two_by_two(), Exponent::Inf, Exponent::Finite(1.0));
        let r1 = oracle_resolution(&spec, Field::Real, 500).unwrap();
        let r2 = oracle_resolution(&spec, Field::Real, 1000).unwrap();
        assert!(r2 < r1);
        assert_abs_diff_eq!(r2, r1 / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn complex_matrix_under_real_scan_uses_moduli_of_the_image() {
        // x real but A x complex: the scan must score |A x| correctly
        let a = CMatrix::new(1, 1, vec![1.0], vec![1.0]).unwrap();
        let spec = OperatorSpec::counting(a, Exponent::Finite(2.0), Exponent::Finite(2.0));
        let cert = opnorm_oracle(&spec, Field::Real, 10).unwrap();
        assert_abs_diff_eq!(cert.value, 2.0_f64.sqrt(), epsilon = 1e-12);
    }
}
