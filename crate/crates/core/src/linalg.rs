use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::cvector::CVector;
use crate::error::{precondition, Error};

/// Dense complex matrix in row-major storage, real and imaginary parts
/// held separately. Real matrices are the `im == 0` slice of this type.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl CMatrix {
    pub fn new(rows: usize, cols: usize, re: Vec<f64>, im: Vec<f64>) -> Result<Self, Error> {
        if re.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: re.len(),
            });
        }
        if im.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: im.len(),
            });
        }
        Ok(CMatrix { rows, cols, re, im })
    }

    pub fn real(rows: usize, cols: usize, re: Vec<f64>) -> Result<Self, Error> {
        let im = vec![0.0; re.len()];
        CMatrix::new(rows, cols, re, im)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, Error> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut re = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch {
                    expected: c,
                    got: row.len(),
                });
            }
            re.extend_from_slice(row);
        }
        CMatrix::real(r, c, re)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn re(&self) -> &[f64] {
        &self.re
    }

    pub fn im(&self) -> &[f64] {
        &self.im
    }

    pub fn re_at(&self, i: usize, j: usize) -> f64 {
        self.re[i * self.cols + j]
    }

    pub fn im_at(&self, i: usize, j: usize) -> f64 {
        self.im[i * self.cols + j]
    }

    pub fn is_real(&self) -> bool {
        self.im.iter().all(|v| *v == 0.0)
    }

    /// `A x` for complex `x`; dimensions must agree.
    pub fn matvec(&self, x: &CVector) -> Result<CVector, Error> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: x.len(),
            });
        }
        let mut out_re = vec![0.0; self.rows];
        let mut out_im = vec![0.0; self.rows];
        for i in 0..self.rows {
            let mut acc_re = 0.0;
            let mut acc_im = 0.0;
            let base = i * self.cols;
            for j in 0..self.cols {
                let (ar, ai) = (self.re[base + j], self.im[base + j]);
                let (xr, xi) = (x.re()[j], x.im()[j]);
                acc_re += ar * xr - ai * xi;
                acc_im += ar * xi + ai * xr;
            }
            out_re[i] = acc_re;
            out_im[i] = acc_im;
        }
        CVector::new(out_re, out_im)
    }

    /// Plain transpose (no conjugation).
    pub fn transpose(&self) -> CMatrix {
        let mut re = vec![0.0; self.re.len()];
        let mut im = vec![0.0; self.im.len()];
        for i in 0..self.rows {
            for j in 0..self.cols {
                re[j * self.rows + i] = self.re[i * self.cols + j];
                im[j * self.rows + i] = self.im[i * self.cols + j];
            }
        }
        CMatrix {
            rows: self.cols,
            cols: self.rows,
            re,
            im,
        }
    }

    pub fn conj(&self) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            re: self.re.clone(),
            im: self.im.iter().map(|v| -v).collect(),
        }
    }

    /// Entrywise modulus `|A|`, a real matrix.
    pub fn modulus(&self) -> CMatrix {
        let re: Vec<f64> = self
            .re
            .iter()
            .zip(&self.im)
            .map(|(&a, &b)| a.hypot(b))
            .collect();
        CMatrix::real(self.rows, self.cols, re).expect("same shape")
    }

    /// Largest singular value. Complex matrices go through the real
    /// embedding `[[Re, -Im], [Im, Re]]`, which has the same singular
    /// values (each doubled in multiplicity).
    pub fn sigma_max(&self) -> f64 {
        if self.is_real() {
            sigma_max_real(self.rows, self.cols, &self.re)
        } else {
            let (r, c) = (self.rows, self.cols);
            let mut b = vec![0.0; 4 * r * c];
            let bc = 2 * c;
            for i in 0..r {
                for j in 0..c {
                    let (ar, ai) = (self.re[i * c + j], self.im[i * c + j]);
                    b[i * bc + j] = ar;
                    b[i * bc + c + j] = -ai;
                    b[(r + i) * bc + j] = ai;
                    b[(r + i) * bc + c + j] = ar;
                }
            }
            sigma_max_real(2 * r, 2 * c, &b)
        }
    }
}

/// Largest singular value of a real `rows x cols` matrix via the Gram
/// matrix spectrum.
pub fn sigma_max_real(rows: usize, cols: usize, data: &[f64]) -> f64 {
    assert_eq!(data.len(), rows * cols, "shape mismatch");
    let mut gram = vec![0.0; cols * cols];
    for j in 0..cols {
        for k in j..cols {
            let mut acc = 0.0;
            for i in 0..rows {
                acc += data[i * cols + j] * data[i * cols + k];
            }
            gram[j * cols + k] = acc;
            gram[k * cols + j] = acc;
        }
    }
    let (evals, _) = symmetric_eigen(&gram, cols);
    evals.first().copied().unwrap_or(0.0).max(0.0).sqrt()
}

/// Eigenvalues (descending) and eigenvectors of a symmetric matrix by
/// cyclic Jacobi rotations: `A = V diag(evals) V^T`, columns of `V` are
/// the eigenvectors. Sizes here are tiny, so the O(n^3)-per-sweep cost
/// is irrelevant next to Jacobi's accuracy.
pub fn symmetric_eigen(matrix: &[f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(matrix.len(), n * n, "shape mismatch");
    let mut a = matrix.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let frob: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let tol = 1e-15 * frob.max(1.0);
    for _sweep in 0..64 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += 2.0 * a[p * n + q] * a[p * n + q];
            }
        }
        if off.sqrt() <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[j * n + j]
            .partial_cmp(&a[i * n + i])
            .unwrap_or(core::cmp::Ordering::Equal)
    });
    let evals: Vec<f64> = order.iter().map(|&i| a[i * n + i]).collect();
    let mut evecs = vec![0.0; n * n];
    for (new_col, &old_col) in order.iter().enumerate() {
        for k in 0..n {
            evecs[k * n + new_col] = v[k * n + old_col];
        }
    }
    (evals, evecs)
}

/// Square root and inverse square root of a symmetric positive definite
/// matrix, both symmetric.
pub fn spd_sqrt_invsqrt(matrix: &[f64], n: usize) -> Result<(Vec<f64>, Vec<f64>), Error> {
    let (evals, evecs) = symmetric_eigen(matrix, n);
    if evals.iter().any(|&l| l <= 0.0) {
        return Err(precondition("matrix is not positive definite"));
    }
    let mut sqrt = vec![0.0; n * n];
    let mut invsqrt = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let mut s = 0.0;
            let mut si = 0.0;
            for k in 0..n {
                let w = evecs[i * n + k] * evecs[j * n + k];
                let root = evals[k].sqrt();
                s += w * root;
                si += w / root;
            }
            sqrt[i * n + j] = s;
            invsqrt[i * n + j] = si;
        }
    }
    Ok((sqrt, invsqrt))
}

/// `A B` for real row-major matrices, used by the reductions that fold
/// weight scalings into the operator.
pub fn matmul_real(
    a_rows: usize,
    inner: usize,
    b_cols: usize,
    a: &[f64],
    b: &[f64],
) -> Vec<f64> {
    assert_eq!(a.len(), a_rows * inner, "shape mismatch");
    assert_eq!(b.len(), inner * b_cols, "shape mismatch");
    let mut out = vec![0.0; a_rows * b_cols];
    for i in 0..a_rows {
        for k in 0..inner {
            let aik = a[i * inner + k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..b_cols {
                out[i * b_cols + j] += aik * b[k * b_cols + j];
            }
        }
    }
    out
}
