use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::Error;
use crate::exponent::Exponent;
use crate::measure::DiscreteMeasure;

/// Weighted p-norm `(sum_t mu_t |x_t|^p)^{1/p}`, or `max_t |x_t|` when
/// `p = inf` (weights do not enter the sup norm).
///
/// Entries are rescaled by their maximum modulus before powering so that
/// extreme inputs neither overflow nor underflow; the factor is restored
/// afterwards.
pub fn weighted_pnorm(moduli: &[f64], p: Exponent, mu: &DiscreteMeasure) -> Result<f64, Error> {
    if moduli.len() != mu.len() {
        return Err(Error::DimensionMismatch {
            expected: mu.len(),
            got: moduli.len(),
        });
    }
    let scale = moduli.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if scale == 0.0 {
        return Ok(0.0);
    }
    match p {
        Exponent::Inf => Ok(scale),
        Exponent::Finite(p) => {
            let sum: f64 = moduli
                .iter()
                .zip(mu.weights())
                .map(|(&v, &w)| w * (v.abs() / scale).powf(p))
                .sum();
            Ok(scale * sum.powf(1.0 / p))
        }
    }
}

/// Convenience wrapper for complex vectors given as (re, im) slices.
pub fn weighted_pnorm_complex(
    re: &[f64],
    im: &[f64],
    p: Exponent,
    mu: &DiscreteMeasure,
) -> Result<f64, Error> {
    if re.len() != im.len() {
        return Err(Error::DimensionMismatch {
            expected: re.len(),
            got: im.len(),
        });
    }
    let moduli: Vec<f64> = re.iter().zip(im).map(|(&a, &b)| a.hypot(b)).collect();
    weighted_pnorm(&moduli, p, mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn euclidean_three_four_five() {
        let mu = DiscreteMeasure::counting(2);
        let v = weighted_pnorm(&[3.0, 4.0], Exponent::Finite(2.0), &mu).unwrap();
        assert_relative_eq!(v, 5.0, max_relative = 1e-15);
    }

    #[test]
    fn sup_norm_ignores_weights() {
        let mu = DiscreteMeasure::new(vec![10.0, 0.5]).unwrap();
        let v = weighted_pnorm(&[1.0, 1.0], Exponent::Inf, &mu).unwrap();
        assert_eq!(v, 1.0);
    }

    #[test]
    fn one_norm_of_complex_pair() {
        // |1 - i| + |1 + i| = 2 sqrt(2)
        let mu = DiscreteMeasure::counting(2);
        let v = weighted_pnorm_complex(&[1.0, 1.0], &[-1.0, 1.0], Exponent::Finite(1.0), &mu)
            .unwrap();
        assert_relative_eq!(v, 2.0 * 2.0_f64.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn weights_enter_finite_norms() {
        // (4 * 1^2 + 9 * 1^2)^{1/2} = sqrt(13)
        let mu = DiscreteMeasure::new(vec![4.0, 9.0]).unwrap();
        let v = weighted_pnorm(&[1.0, 1.0], Exponent::Finite(2.0), &mu).unwrap();
        assert_relative_eq!(v, 13.0_f64.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn zero_vector_has_zero_norm() {
        let mu = DiscreteMeasure::counting(3);
        assert_eq!(
            weighted_pnorm(&[0.0, 0.0, 0.0], Exponent::Finite(1.5), &mu).unwrap(),
            0.0
        );
    }

    #[test]
    fn extreme_magnitudes_survive_rescaling() {
        let mu = DiscreteMeasure::counting(2);
        let v = weighted_pnorm(&[1e300, 1e300], Exponent::Finite(2.0), &mu).unwrap();
        assert_relative_eq!(v, 1e300 * 2.0_f64.sqrt(), max_relative = 1e-14);
        let w = weighted_pnorm(&[1e-300, 1e-300], Exponent::Finite(2.0), &mu).unwrap();
        assert_relative_eq!(w, 1e-300 * 2.0_f64.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let mu = DiscreteMeasure::counting(3);
        assert!(weighted_pnorm(&[1.0], Exponent::Finite(2.0), &mu).is_err());
    }

    proptest! {
        // Absolute homogeneity: ||c x|| = |c| ||x||
        #[test]
        fn homogeneity(
            x in prop::collection::vec(-10.0..10.0f64, 1..6),
            c in -5.0..5.0f64,
            p_raw in 1.0..8.0f64,
        ) {
            let mu = DiscreteMeasure::counting(x.len());
            let p = Exponent::Finite(p_raw);
            let scaled: Vec<f64> = x.iter().map(|v| c * v).collect();
            let lhs = weighted_pnorm(&scaled, p, &mu).unwrap();
            let rhs = c.abs() * weighted_pnorm(&x, p, &mu).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + rhs));
        }

        // Triangle inequality on the counting measure
        #[test]
        fn triangle_inequality(
            x in prop::collection::vec(-10.0..10.0f64, 1..6),
            y_seed in prop::collection::vec(-10.0..10.0f64, 1..6),
            p_raw in 1.0..8.0f64,
        ) {
            let n = x.len().min(y_seed.len());
            let mu = DiscreteMeasure::counting(n);
            let p = Exponent::Finite(p_raw);
            let sum: Vec<f64> = x[..n].iter().zip(&y_seed[..n]).map(|(a, b)| a + b).collect();
            let lhs = weighted_pnorm(&sum, p, &mu).unwrap();
            let rhs = weighted_pnorm(&x[..n], p, &mu).unwrap()
                + weighted_pnorm(&y_seed[..n], p, &mu).unwrap();
            prop_assert!(lhs <= rhs + 1e-10 * (1.0 + rhs));
        }

        // Monotonicity of p -> ||x||_p (nonincreasing on counting measure)
        #[test]
        fn p_monotonicity(
            x in prop::collection::vec(-10.0..10.0f64, 1..6),
            p_raw in 1.0..7.0f64,
            dp in 0.1..3.0f64,
        ) {
            let mu = DiscreteMeasure::counting(x.len());
            let lo = weighted_pnorm(&x, Exponent::Finite(p_raw), &mu).unwrap();
            let hi = weighted_pnorm(&x, Exponent::Finite(p_raw + dp), &mu).unwrap();
            let sup = weighted_pnorm(&x, Exponent::Inf, &mu).unwrap();
            prop_assert!(hi <= lo + 1e-10 * (1.0 + lo));
            prop_assert!(sup <= hi + 1e-10 * (1.0 + hi));
        }
    }
}
