use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::cvector::CVector;
use crate::error::{domain, precondition, Error};
use crate::exponent::Exponent;
use crate::linalg::{matmul_real, spd_sqrt_invsqrt};
use crate::measure::DiscreteMeasure;
use crate::pnorm::weighted_pnorm;

/// A norm with `||x|| = || |x| ||`: it only sees entrywise moduli, which
/// makes it monotonic on nonnegative vectors.
#[derive(Debug, Clone, PartialEq)]
pub enum AbsoluteNorm {
    Holder(Exponent),
    WeightedMax(Vec<f64>),
    WeightedHolder(Exponent, DiscreteMeasure),
}

impl AbsoluteNorm {
    pub fn holder(p: Exponent) -> Self {
        AbsoluteNorm::Holder(p)
    }

    pub fn weighted_max(w: Vec<f64>) -> Result<Self, Error> {
        if w.is_empty() || w.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
            return Err(domain("weighted max norm needs strictly positive weights"));
        }
        Ok(AbsoluteNorm::WeightedMax(w))
    }

    /// Dimension the norm is pinned to, if any.
    pub fn dim(&self) -> Option<usize> {
        match self {
            AbsoluteNorm::Holder(_) => None,
            AbsoluteNorm::WeightedMax(w) => Some(w.len()),
            AbsoluteNorm::WeightedHolder(_, mu) => Some(mu.len()),
        }
    }

    /// Norm of a vector given by its entrywise moduli.
    pub fn eval_moduli(&self, moduli: &[f64]) -> Result<f64, Error> {
        match self {
            AbsoluteNorm::Holder(p) => {
                let mu = DiscreteMeasure::counting(moduli.len().max(1));
                if moduli.is_empty() {
                    return Err(domain("norm of an empty vector"));
                }
                weighted_pnorm(moduli, *p, &mu)
            }
            AbsoluteNorm::WeightedMax(w) => {
                if moduli.len() != w.len() {
                    return Err(Error::DimensionMismatch {
                        expected: w.len(),
                        got: moduli.len(),
                    });
                }
                Ok(moduli
                    .iter()
                    .zip(w)
                    .fold(0.0f64, |acc, (&m, &wt)| acc.max(wt * m.abs())))
            }
            AbsoluteNorm::WeightedHolder(p, mu) => weighted_pnorm(moduli, *p, mu),
        }
    }

    pub fn eval(&self, x: &CVector) -> Result<f64, Error> {
        self.eval_moduli(&x.modulus())
    }

    pub fn eval_real(&self, x: &[f64]) -> Result<f64, Error> {
        self.eval_moduli(x)
    }
}

/// Euclidean-type norm `||x|| = sqrt(x' G x)` from a symmetric positive
/// definite Gram matrix; complex vectors get the canonical inner-product
/// complexification `||x||^2 = ||Re x||^2 + ||Im x||^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramNorm {
    n: usize,
    gram: Vec<f64>,
    sqrt: Vec<f64>,
    invsqrt: Vec<f64>,
}

impl GramNorm {
    pub fn new(n: usize, gram: Vec<f64>) -> Result<Self, Error> {
        if gram.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: gram.len(),
            });
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if (gram[i * n + j] - gram[j * n + i]).abs() > 1e-12 {
                    return Err(domain("Gram matrix must be symmetric"));
                }
            }
        }
        let (sqrt, invsqrt) =
            spd_sqrt_invsqrt(&gram, n).map_err(|_| domain("Gram matrix must be positive definite"))?;
        Ok(GramNorm {
            n,
            gram,
            sqrt,
            invsqrt,
        })
    }

    pub fn identity(n: usize) -> Self {
        let mut gram = alloc::vec![0.0; n * n];
        for i in 0..n {
            gram[i * n + i] = 1.0;
        }
        GramNorm::new(n, gram).expect("identity is SPD")
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn gram(&self) -> &[f64] {
        &self.gram
    }

    pub fn sqrt_matrix(&self) -> &[f64] {
        &self.sqrt
    }

    pub fn invsqrt_matrix(&self) -> &[f64] {
        &self.invsqrt
    }

    pub fn eval_real(&self, x: &[f64]) -> Result<f64, Error> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        let mut quad = 0.0;
        for i in 0..self.n {
            let row = &self.gram[i * self.n..(i + 1) * self.n];
            let gx: f64 = row.iter().zip(x).map(|(g, v)| g * v).sum();
            quad += x[i] * gx;
        }
        Ok(quad.max(0.0).sqrt())
    }

    /// Canonical complexification: `sqrt(||Re x||^2 + ||Im x||^2)`.
    pub fn eval(&self, x: &CVector) -> Result<f64, Error> {
        let a = self.eval_real(x.re())?;
        let b = self.eval_real(x.im())?;
        Ok(a.hypot(b))
    }

    /// `G_y^{1/2} A G_x^{-1/2}` for a real matrix `A`, the change of
    /// variables that turns a Gram-norm operator problem Euclidean.
    pub fn whiten(target: &GramNorm, a_rows: usize, a_cols: usize, a: &[f64], source: &GramNorm) -> Result<Vec<f64>, Error> {
        if target.n != a_rows || source.n != a_cols {
            return Err(precondition("Gram dimensions must match the operator"));
        }
        let left = matmul_real(a_rows, a_rows, a_cols, &target.sqrt, a);
        Ok(matmul_real(a_rows, a_cols, a_cols, &left, &source.invsqrt))
    }
}

/// Real base norms available to the complexification-extension machinery.
#[derive(Debug, Clone, PartialEq)]
pub enum BaseNorm {
    Absolute(AbsoluteNorm),
    InnerProduct(GramNorm),
}

impl BaseNorm {
    pub fn holder(p: Exponent) -> Self {
        BaseNorm::Absolute(AbsoluteNorm::Holder(p))
    }

    pub fn dim(&self) -> Option<usize> {
        match self {
            BaseNorm::Absolute(a) => a.dim(),
            BaseNorm::InnerProduct(g) => Some(g.dim()),
        }
    }

    pub fn eval_real(&self, x: &[f64]) -> Result<f64, Error> {
        match self {
            BaseNorm::Absolute(a) => a.eval_real(x),
            BaseNorm::InnerProduct(g) => g.eval_real(x),
        }
    }
}
