use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::Error;

/// A complex vector stored as a pair of real vectors.
///
/// A vector is *real* iff its imaginary part is identically zero; real
/// vectors are exactly the image of `R^n` inside the complexification.
#[derive(Debug, Clone, PartialEq)]
pub struct CVector {
    re: Vec<f64>,
    im: Vec<f64>,
}

impl CVector {
    pub fn new(re: Vec<f64>, im: Vec<f64>) -> Result<Self, Error> {
        if re.len() != im.len() {
            return Err(Error::DimensionMismatch {
                expected: re.len(),
                got: im.len(),
            });
        }
        Ok(CVector { re, im })
    }

    pub fn real(re: Vec<f64>) -> Self {
        let im = vec![0.0; re.len()];
        CVector { re, im }
    }

    pub fn zeros(n: usize) -> Self {
        CVector {
            re: vec![0.0; n],
            im: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.re.len()
    }

    pub fn is_empty(&self) -> bool {
        self.re.is_empty()
    }

    pub fn re(&self) -> &[f64] {
        &self.re
    }

    pub fn im(&self) -> &[f64] {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.iter().all(|v| *v == 0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.re.iter().all(|v| *v == 0.0) && self.is_real()
    }

    /// Real part, embedded back into the complexification.
    pub fn real_part(&self) -> CVector {
        CVector::real(self.re.clone())
    }

    /// Imaginary part as a real vector in the complexification.
    pub fn imag_part(&self) -> CVector {
        CVector::real(self.im.clone())
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> CVector {
        CVector {
            re: self.re.clone(),
            im: self.im.iter().map(|v| -v).collect(),
        }
    }

    /// Entrywise modulus `|x_t|`.
    pub fn modulus(&self) -> Vec<f64> {
        self.re
            .iter()
            .zip(&self.im)
            .map(|(&a, &b)| a.hypot(b))
            .collect()
    }

    /// Multiplication by a complex scalar `a + ib`.
    pub fn scale_complex(&self, a: f64, b: f64) -> CVector {
        let re = self
            .re
            .iter()
            .zip(&self.im)
            .map(|(&x, &y)| a * x - b * y)
            .collect();
        let im = self
            .re
            .iter()
            .zip(&self.im)
            .map(|(&x, &y)| a * y + b * x)
            .collect();
        CVector { re, im }
    }

    pub fn scale(&self, c: f64) -> CVector {
        self.scale_complex(c, 0.0)
    }

    pub fn add(&self, other: &CVector) -> Result<CVector, Error> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        Ok(CVector {
            re: self.re.iter().zip(&other.re).map(|(a, b)| a + b).collect(),
            im: self.im.iter().zip(&other.im).map(|(a, b)| a + b).collect(),
        })
    }
}

/// Entrywise phase `phi_x` with values in `[-pi, pi]`, satisfying
/// `x_t = e^{i phi_x(t)} |x_t|`.
///
/// The half-angle form `2 atan(Im / (Re + |x|))` is used away from the
/// negative real axis; on it (`Im = 0`, `Re < 0`) the phase is `pi`.
/// Zero entries get phase 0, which keeps the identity trivially true.
pub fn phase_function(x: &CVector) -> Vec<f64> {
    x.re()
        .iter()
        .zip(x.im())
        .map(|(&re, &im)| {
            if im == 0.0 && re == 0.0 {
                0.0
            } else if im == 0.0 && re < 0.0 {
                PI
            } else {
                let r = re.hypot(im);
                2.0 * (im / (re + r)).atan()
            }
        })
        .collect()
}

/// `Re(e^{i phi} x) = cos(phi) Re x - sin(phi) Im x`.
pub fn real_part_rotation(x: &CVector, phi: f64) -> Vec<f64> {
    let (c, s) = (phi.cos(), phi.sin());
    x.re()
        .iter()
        .zip(x.im())
        .map(|(&re, &im)| c * re - s * im)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn entry(re: f64, im: f64) -> CVector {
        CVector::new(vec![re], vec![im]).unwrap()
    }

    #[test]
    fn phase_of_negative_real_is_pi() {
        let phi = phase_function(&entry(-1.0, 0.0));
        assert_eq!(phi[0], PI);
    }

    #[test]
    fn phase_of_i_is_half_pi() {
        let phi = phase_function(&entry(0.0, 1.0));
        assert_abs_diff_eq!(phi[0], PI / 2.0, epsilon = 1e-15);
    }

    #[test]
    fn phase_of_one_plus_i_is_quarter_pi() {
        // e^{i pi/4} * sqrt(2) must reproduce 1 + i
        let phi = phase_function(&entry(1.0, 1.0));
        assert_abs_diff_eq!(phi[0], PI / 4.0, epsilon = 1e-15);
        let r = 2.0_f64.sqrt();
        assert_abs_diff_eq!(r * phi[0].cos(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r * phi[0].sin(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn phase_of_zero_entry_is_zero() {
        let phi = phase_function(&entry(0.0, 0.0));
        assert_eq!(phi[0], 0.0);
    }

    #[test]
    fn rotation_of_real_vector_by_zero_is_identity() {
        let x = CVector::real(vec![3.0, -2.0, 0.5]);
        assert_eq!(real_part_rotation(&x, 0.0), vec![3.0, -2.0, 0.5]);
    }

    #[test]
    fn rotation_of_i_by_minus_half_pi_is_one() {
        let x = entry(0.0, 1.0);
        let r = real_part_rotation(&x, -PI / 2.0);
        assert_abs_diff_eq!(r[0], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn rotation_of_one_plus_i_by_quarter_pi_vanishes() {
        // cos(pi/4 + pi/4) * sqrt(2) = 0
        let x = entry(1.0, 1.0);
        let r = real_part_rotation(&x, PI / 4.0);
        assert_abs_diff_eq!(r[0], 0.0, epsilon = 1e-15);
    }

    #[test]
    fn conjugate_negates_imaginary_part() {
        let x = CVector::new(vec![1.0, 2.0], vec![3.0, -4.0]).unwrap();
        let c = x.conj();
        assert_eq!(c.re(), &[1.0, 2.0]);
        assert_eq!(c.im(), &[-3.0, 4.0]);
    }

    #[test]
    fn length_mismatch_is_rejected() {
        assert!(CVector::new(vec![1.0], vec![1.0, 2.0]).is_err());
    }

    proptest! {
        // x_t = e^{i phi_x(t)} |x_t| entrywise
        #[test]
        fn phase_reconstructs_entries(
            re in prop::collection::vec(-10.0..10.0f64, 1..6),
            im_seed in prop::collection::vec(-10.0..10.0f64, 1..6),
        ) {
            let n = re.len().min(im_seed.len());
            let x = CVector::new(re[..n].to_vec(), im_seed[..n].to_vec()).unwrap();
            let phi = phase_function(&x);
            let m = x.modulus();
            for t in 0..n {
                prop_assert!((m[t] * phi[t].cos() - x.re()[t]).abs() < 1e-12 * (1.0 + m[t]));
                prop_assert!((m[t] * phi[t].sin() - x.im()[t]).abs() < 1e-12 * (1.0 + m[t]));
            }
        }

        // Re(e^{i phi} x)_t = cos(phi_x(t) + phi) |x_t|
        #[test]
        fn rotation_matches_cosine_form(
            re in prop::collection::vec(-5.0..5.0f64, 1..6),
            im in prop::collection::vec(-5.0..5.0f64, 1..6),
            phi in -10.0..10.0f64,
        ) {
            let n = re.len().min(im.len());
            let x = CVector::new(re[..n].to_vec(), im[..n].to_vec()).unwrap();
            let rot = real_part_rotation(&x, phi);
            let phases = phase_function(&x);
            let m = x.modulus();
            for t in 0..n {
                let expect = (phases[t] + phi).cos() * m[t];
                prop_assert!((rot[t] - expect).abs() < 1e-12 * (1.0 + m[t]));
            }
        }
    }
}
