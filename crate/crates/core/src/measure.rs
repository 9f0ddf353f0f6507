use alloc::vec;
use alloc::vec::Vec;

use crate::error::{domain, Error};

/// A finite discrete measure: strictly positive weights on `{1..n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure {
    weights: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn new(weights: Vec<f64>) -> Result<Self, Error> {
        if weights.is_empty() {
            return Err(domain("measure needs at least one atom"));
        }
        if weights.iter().any(|w| !w.is_finite() || *w <= 0.0) {
            return Err(domain("all measure weights must be strictly positive"));
        }
        Ok(DiscreteMeasure { weights })
    }

    /// Counting measure: every atom has mass 1.
    pub fn counting(n: usize) -> Self {
        DiscreteMeasure {
            weights: vec![1.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn is_counting(&self) -> bool {
        self.weights.iter().all(|w| *w == 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counting_measure_is_all_ones() {
        let mu = DiscreteMeasure::counting(4);
        assert_eq!(mu.weights(), &[1.0, 1.0, 1.0, 1.0]);
        assert!(mu.is_counting());
    }

    #[test]
    fn rejects_nonpositive_weights() {
        assert!(DiscreteMeasure::new(vec![1.0, 0.0]).is_err());
        assert!(DiscreteMeasure::new(vec![1.0, -2.0]).is_err());
        assert!(DiscreteMeasure::new(vec![]).is_err());
    }
}
