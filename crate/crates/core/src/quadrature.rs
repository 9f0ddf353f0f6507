use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{precondition, Error};

pub const MIN_NODES: usize = 16;

/// Equispaced quadrature grid on `[0, 2 pi)`.
///
/// The composite rule with nodes `phi_k = 2 pi k / m` integrates
/// trigonometric polynomials of degree `< m` exactly, which is what the
/// circle integrals in this crate need. Sums are compensated (Neumaier)
/// so node count does not erode accuracy.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    nodes: Vec<f64>,
}

impl QuadratureGrid {
    pub fn new(m: usize) -> Result<Self, Error> {
        if m < MIN_NODES {
            return Err(precondition("quadrature grid needs at least 16 nodes"));
        }
        let h = 2.0 * PI / m as f64;
        let nodes = (0..m).map(|k| k as f64 * h).collect();
        Ok(QuadratureGrid { nodes })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.nodes.len() as f64
    }

    /// `integral_0^{2 pi} f(phi) d phi` by the equispaced rule.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.spacing() * neumaier_sum(self.nodes.iter().map(|&phi| f(phi)))
    }

    /// Same rule applied to samples already taken on this grid.
    pub fn integrate_samples(&self, samples: &[f64]) -> Result<f64, Error> {
        if samples.len() != self.nodes.len() {
            return Err(Error::DimensionMismatch {
                expected: self.nodes.len(),
                got: samples.len(),
            });
        }
        Ok(self.spacing() * neumaier_sum(samples.iter().copied()))
    }
}

/// Compensated summation; the correction term also absorbs the case where
/// the addend dominates the running sum.
pub(crate) fn neumaier_sum<I: Iterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn rejects_tiny_grids() {
        assert!(QuadratureGrid::new(15).is_err());
        assert!(QuadratureGrid::new(16).is_ok());
    }

    #[test]
    fn cosine_squared_integrates_to_pi_exactly_at_minimum_size() {
        let g = QuadratureGrid::new(16).unwrap();
        let v = g.integrate(|phi| phi.cos().powi(2));
        assert_abs_diff_eq!(v, PI, epsilon = 1e-14);
    }

    #[test]
    fn cosine_fourth_integrates_to_three_quarter_pi() {
        let g = QuadratureGrid::new(32).unwrap();
        let v = g.integrate(|phi| phi.cos().powi(4));
        assert_abs_diff_eq!(v, 3.0 * PI / 4.0, epsilon = 1e-14);
    }

    #[test]
    fn absolute_cosine_integrates_to_four() {
        // |cos| is only piecewise smooth, so the rule is second order here;
        // 2^16 nodes leave an aliasing error well under 1e-8.
        let g = QuadratureGrid::new(1 << 16).unwrap();
        let v = g.integrate(|phi| phi.cos().abs());
        assert_abs_diff_eq!(v, 4.0, epsilon = 1e-8);
    }

    #[test]
    fn trig_polynomial_with_offset_is_exact() {
        // f = 1 + cos(3 phi) + sin(7 phi): integral 2 pi, degree < 16
        let g = QuadratureGrid::new(16).unwrap();
        let v = g.integrate(|phi| 1.0 + (3.0 * phi).cos() + (7.0 * phi).sin());
        assert_abs_diff_eq!(v, 2.0 * PI, epsilon = 1e-13);
    }

    #[test]
    fn samples_and_closure_agree() {
        let g = QuadratureGrid::new(64).unwrap();
        let samples: alloc::vec::Vec<f64> = g.nodes().iter().map(|&p| p.sin().abs()).collect();
        let a = g.integrate(|p| p.sin().abs());
        let b = g.integrate_samples(&samples).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sample_length_mismatch_is_rejected() {
        let g = QuadratureGrid::new(16).unwrap();
        assert!(g.integrate_samples(&[1.0; 8]).is_err());
    }

    #[test]
    fn neumaier_handles_cancellation() {
        let vals = [1e16, 1.0, -1e16];
        assert_eq!(neumaier_sum(vals.iter().copied()), 1.0);
    }
}
