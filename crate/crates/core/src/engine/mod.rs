//! Operator-norm computation between weighted `l_p` spaces.
//!
//! Weighted problems are reduced to counting-measure problems by the
//! change of variables `u = diag(mu1^{1/p}) x`, which turns
//! `sup ||A x||_{q,mu2} / ||x||_{p,mu1}` into an unweighted problem for
//! `B = diag(mu2^{1/q}) A diag(mu1^{1/p})^{-1}` (the scalings degenerate
//! to the identity at the infinite exponent). Closed forms cover `p = 1`
//! (column rule), `q = inf` (row duals) and `(2,2)` (largest singular
//! value); everything else goes through multistart ascent or, at small
//! dimension, a brute-force sphere oracle.

mod oracle;
mod search;

pub use oracle::{opnorm_oracle, opnorm_oracle_override, oracle_resolution};
pub use search::{
    opnorm_general, opnorm_search, opnorm_search_with_starts, ComplexNorm, SizedAbsolute,
};
pub(crate) use search::cnorm;

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::cvector::CVector;
use crate::error::{precondition, unsupported, Error};
use crate::exponent::Exponent;
use crate::linalg::{symmetric_eigen, CMatrix};
use crate::measure::DiscreteMeasure;
use crate::pnorm::weighted_pnorm;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Real,
    Complex,
}

impl core::fmt::Display for Field {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Field::Real => write!(f, "real"),
            Field::Complex => write!(f, "complex"),
        }
    }
}

/// Which algorithm produced a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ColumnRule,
    RowDual,
    SingularValue,
    Ascent,
    PatternSearch,
    Oracle,
}

impl core::fmt::Display for Method {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let s = match self {
            Method::ColumnRule => "column_rule",
            Method::RowDual => "row_dual",
            Method::SingularValue => "singular_value",
            Method::Ascent => "ascent",
            Method::PatternSearch => "pattern_search",
            Method::Oracle => "oracle",
        };
        write!(f, "{}", s)
    }
}

/// A matrix together with the weighted source and target spaces it acts
/// between.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSpec {
    matrix: CMatrix,
    source_p: Exponent,
    target_q: Exponent,
    source_measure: DiscreteMeasure,
    target_measure: DiscreteMeasure,
}

impl OperatorSpec {
    pub fn new(
        matrix: CMatrix,
        source_p: Exponent,
        target_q: Exponent,
        source_measure: DiscreteMeasure,
        target_measure: DiscreteMeasure,
    ) -> Result<Self, Error> {
        if source_measure.len() != matrix.cols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.cols(),
                got: source_measure.len(),
            });
        }
        if target_measure.len() != matrix.rows() {
            return Err(Error::DimensionMismatch {
                expected: matrix.rows(),
                got: target_measure.len(),
            });
        }
        Ok(OperatorSpec {
            matrix,
            source_p,
            target_q,
            source_measure,
            target_measure,
        })
    }

    /// Counting measures on both sides.
    pub fn counting(matrix: CMatrix, source_p: Exponent, target_q: Exponent) -> Self {
        let mu1 = DiscreteMeasure::counting(matrix.cols());
        let mu2 = DiscreteMeasure::counting(matrix.rows());
        OperatorSpec::new(matrix, source_p, target_q, mu1, mu2).expect("counting lengths match")
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn source_p(&self) -> Exponent {
        self.source_p
    }

    pub fn target_q(&self) -> Exponent {
        self.target_q
    }

    pub fn source_measure(&self) -> &DiscreteMeasure {
        &self.source_measure
    }

    pub fn target_measure(&self) -> &DiscreteMeasure {
        &self.target_measure
    }

    pub fn is_real(&self) -> bool {
        self.matrix.is_real()
    }

    pub fn is_counting(&self) -> bool {
        self.source_measure.is_counting() && self.target_measure.is_counting()
    }

    /// `||A x||_{q,mu2} / ||x||_{p,mu1}`; `None` when `x = 0`.
    pub fn ratio(&self, x: &CVector) -> Result<Option<f64>, Error> {
        let den = weighted_pnorm(&x.modulus(), self.source_p, &self.source_measure)?;
        if den == 0.0 {
            return Ok(None);
        }
        let ax = self.matrix.matvec(x)?;
        let num = weighted_pnorm(&ax.modulus(), self.target_q, &self.target_measure)?;
        Ok(Some(num / den))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub restarts: usize,
    pub max_iters: usize,
    pub step_tolerance: f64,
    pub value_tolerance: f64,
    pub rng_seed: u64,
    pub smoothing_epsilon: f64,
}

impl SearchConfig {
    pub fn new(
        restarts: usize,
        max_iters: usize,
        step_tolerance: f64,
        value_tolerance: f64,
        rng_seed: u64,
        smoothing_epsilon: f64,
    ) -> Result<Self, Error> {
        if restarts == 0 {
            return Err(precondition("search needs at least one restart"));
        }
        if !(step_tolerance > 0.0) || !(value_tolerance > 0.0) || !(smoothing_epsilon > 0.0) {
            return Err(precondition("search tolerances must be positive"));
        }
        Ok(SearchConfig {
            restarts,
            max_iters,
            step_tolerance,
            value_tolerance,
            rng_seed,
            smoothing_epsilon,
        })
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts.max(1);
        self
    }
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            restarts: 64,
            max_iters: 200,
            step_tolerance: 1e-10,
            value_tolerance: 1e-8,
            rng_seed: 42,
            smoothing_epsilon: 1e-3,
        }
    }
}

/// A computed norm value plus the witness that attains it.
#[derive(Debug, Clone, PartialEq)]
pub struct NormCertificate {
    pub value: f64,
    pub witness: CVector,
    pub field: Field,
    pub method: Method,
    pub converged: bool,
}

/// Weight scalings folded into the matrix: `u = d1 .* x`, `B = D2 A D1^{-1}`.
pub(crate) struct Reduced {
    pub b: CMatrix,
    pub d1: Vec<f64>,
}

pub(crate) fn reduce(spec: &OperatorSpec) -> Reduced {
    let (m, n) = (spec.matrix.rows(), spec.matrix.cols());
    let d1: Vec<f64> = match spec.source_p {
        Exponent::Inf => vec![1.0; n],
        Exponent::Finite(p) => spec
            .source_measure
            .weights()
            .iter()
            .map(|w| w.powf(1.0 / p))
            .collect(),
    };
    let d2: Vec<f64> = match spec.target_q {
        Exponent::Inf => vec![1.0; m],
        Exponent::Finite(q) => spec
            .target_measure
            .weights()
            .iter()
            .map(|w| w.powf(1.0 / q))
            .collect(),
    };
    let mut re = vec![0.0; m * n];
    let mut im = vec![0.0; m * n];
    for i in 0..m {
        for j in 0..n {
            let s = d2[i] / d1[j];
            re[i * n + j] = spec.matrix.re_at(i, j) * s;
            im[i * n + j] = spec.matrix.im_at(i, j) * s;
        }
    }
    Reduced {
        b: CMatrix::new(m, n, re, im).expect("shape preserved"),
        d1,
    }
}

/// Build a certificate from an (unnormalized) witness in original
/// coordinates; the value is recomputed from the witness so the
/// certificate invariants hold by construction.
pub(crate) fn certify(
    spec: &OperatorSpec,
    field: Field,
    method: Method,
    converged: bool,
    witness: CVector,
) -> NormCertificate {
    debug_assert!(field == Field::Complex || witness.is_real());
    let norm = weighted_pnorm(&witness.modulus(), spec.source_p, &spec.source_measure)
        .expect("witness length fixed by spec");
    let witness = if norm == 0.0 {
        // zero matrix or degenerate start: fall back to a basis vector
        let e = CVector::real(
            (0..spec.matrix.cols())
                .map(|j| if j == 0 { 1.0 } else { 0.0 })
                .collect(),
        );
        let n0 = weighted_pnorm(&e.modulus(), spec.source_p, &spec.source_measure)
            .expect("basis vector norm");
        e.scale(1.0 / n0)
    } else {
        witness.scale(1.0 / norm)
    };
    let ax = spec.matrix.matvec(&witness).expect("dims agree");
    let value = weighted_pnorm(&ax.modulus(), spec.target_q, &spec.target_measure)
        .expect("dims agree");
    NormCertificate {
        value,
        witness,
        field,
        method,
        converged,
    }
}

pub(crate) fn reduced_to_original(reduced: &Reduced, u_re: &[f64], u_im: &[f64]) -> CVector {
    let re: Vec<f64> = u_re.iter().zip(&reduced.d1).map(|(v, d)| v / d).collect();
    let im: Vec<f64> = u_im.iter().zip(&reduced.d1).map(|(v, d)| v / d).collect();
    CVector::new(re, im).expect("equal lengths")
}

/// Closed forms: `p = 1` (columns), `q = inf` (row duals; real field only
/// when the matrix is real), and `(2,2)` (largest singular value). `None`
/// when no closed form applies.
pub fn opnorm_exact(spec: &OperatorSpec, field: Field) -> Option<NormCertificate> {
    let red = reduce(spec);
    let b = &red.b;
    let (m, n) = (b.rows(), b.cols());

    if spec.source_p == Exponent::Finite(1.0) {
        // ratio at e_j is ||B e_j||_q; valid over either field since
        // ||B u||_q <= sum_j |u_j| ||B e_j||_q with equality at a column
        let mut best = (0usize, -1.0f64);
        for j in 0..n {
            let col: Vec<f64> = (0..m)
                .map(|i| b.re_at(i, j).hypot(b.im_at(i, j)))
                .collect();
            let mu = DiscreteMeasure::counting(m);
            let v = weighted_pnorm(&col, spec.target_q, &mu).expect("lengths agree");
            if v > best.1 {
                best = (j, v);
            }
        }
        let mut re = vec![0.0; n];
        re[best.0] = 1.0;
        let witness = reduced_to_original(&red, &re, &vec![0.0; n]);
        let witness = match field {
            Field::Real => witness.real_part(),
            Field::Complex => witness,
        };
        return Some(certify(spec, field, Method::ColumnRule, true, witness));
    }

    if spec.target_q == Exponent::Inf {
        if field == Field::Real && !b.is_real() {
            return None;
        }
        let pd = spec.source_p.dual();
        let mut best: Option<(f64, Vec<f64>, Vec<f64>)> = None;
        for i in 0..m {
            let row_mod: Vec<f64> = (0..n)
                .map(|j| b.re_at(i, j).hypot(b.im_at(i, j)))
                .collect();
            let mu = DiscreteMeasure::counting(n);
            let v = weighted_pnorm(&row_mod, pd, &mu).expect("lengths agree");
            if best.as_ref().is_none_or(|(bv, _, _)| v > *bv) {
                // Hoelder attainer for this row, conjugate phases
                let mut u_re = vec![0.0; n];
                let mut u_im = vec![0.0; n];
                match spec.source_p {
                    Exponent::Finite(p) if p > 1.0 => {
                        let e = 1.0 / (p - 1.0);
                        for j in 0..n {
                            let r = row_mod[j];
                            if r > 0.0 {
                                let mag = r.powf(e);
                                u_re[j] = mag * b.re_at(i, j) / r;
                                u_im[j] = -mag * b.im_at(i, j) / r;
                            }
                        }
                    }
                    Exponent::Finite(_) => {
                        // p = 1 handled above; unreachable
                        let jmax = (0..n)
                            .max_by(|&a, &c| row_mod[a].partial_cmp(&row_mod[c]).unwrap())
                            .unwrap_or(0);
                        u_re[jmax] = 1.0;
                    }
                    Exponent::Inf => {
                        for j in 0..n {
                            let r = row_mod[j];
                            if r > 0.0 {
                                u_re[j] = b.re_at(i, j) / r;
                                u_im[j] = -b.im_at(i, j) / r;
                            } else {
                                u_re[j] = 1.0;
                            }
                        }
                    }
                }
                best = Some((v, u_re, u_im));
            }
        }
        let (_, u_re, u_im) = best?;
        let witness = reduced_to_original(&red, &u_re, &u_im);
        return Some(certify(spec, field, Method::RowDual, true, witness));
    }

    if spec.source_p == Exponent::Finite(2.0) && spec.target_q == Exponent::Finite(2.0) {
        let witness = match (field, b.is_real()) {
            (Field::Complex, _) => {
                // Hermitian Gram of the complex matrix via its real embedding
                let gram = complex_gram(b);
                let (evals, evecs) = symmetric_eigen(&gram, 2 * n);
                let _ = evals;
                let u_re: Vec<f64> = (0..n).map(|j| evecs[j * 2 * n]).collect();
                let u_im: Vec<f64> = (0..n).map(|j| evecs[(n + j) * 2 * n]).collect();
                reduced_to_original(&red, &u_re, &u_im)
            }
            (Field::Real, true) => {
                let gram = real_gram(m, n, b.re());
                let (_, evecs) = symmetric_eigen(&gram, n);
                let u: Vec<f64> = (0..n).map(|j| evecs[j * n]).collect();
                reduced_to_original(&red, &u, &vec![0.0; n])
            }
            (Field::Real, false) => {
                // real input, complex output: stack Re B over Im B
                let mut stacked = vec![0.0; 2 * m * n];
                stacked[..m * n].copy_from_slice(b.re());
                stacked[m * n..].copy_from_slice(b.im());
                let gram = real_gram(2 * m, n, &stacked);
                let (_, evecs) = symmetric_eigen(&gram, n);
                let u: Vec<f64> = (0..n).map(|j| evecs[j * n]).collect();
                reduced_to_original(&red, &u, &vec![0.0; n])
            }
        };
        let witness = match field {
            Field::Real => witness.real_part(),
            Field::Complex => witness,
        };
        return Some(certify(spec, field, Method::SingularValue, true, witness));
    }

    None
}

fn real_gram(rows: usize, cols: usize, data: &[f64]) -> Vec<f64> {
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
    gram
}

/// Gram of the real embedding `[[Re, -Im], [Im, Re]]`, ordered so the top
/// eigenvector splits as `(re, im)`.
fn complex_gram(b: &CMatrix) -> Vec<f64> {
    let (m, n) = (b.rows(), b.cols());
    let bc = 2 * n;
    let mut emb = vec![0.0; 2 * m * bc];
    for i in 0..m {
        for j in 0..n {
            let (ar, ai) = (b.re_at(i, j), b.im_at(i, j));
            emb[i * bc + j] = ar;
            emb[i * bc + n + j] = -ai;
            emb[(m + i) * bc + j] = ai;
            emb[(m + i) * bc + n + j] = ar;
        }
    }
    real_gram(2 * m, bc, &emb)
}

/// Transposed spec with dual exponents: `||A||_{p,q} = ||A'||_{q',p'}`
/// for counting measures.
pub fn transpose_spec(spec: &OperatorSpec) -> Result<OperatorSpec, Error> {
    if !spec.is_counting() {
        return Err(unsupported(
            "transpose duality is implemented for counting measures only",
        ));
    }
    Ok(OperatorSpec::counting(
        spec.matrix.transpose(),
        spec.target_q.dual(),
        spec.source_p.dual(),
    ))
}

/// Certificate invariant check, used by tests and the CLI after
/// deserialization.
pub fn validate_certificate(spec: &OperatorSpec, cert: &NormCertificate) -> Result<(), Error> {
    let src = weighted_pnorm(&cert.witness.modulus(), spec.source_p, &spec.source_measure)?;
    if (src - 1.0).abs() > 1e-10 {
        return Err(precondition("witness is not a unit vector"));
    }
    let ax = spec.matrix.matvec(&cert.witness)?;
    let val = weighted_pnorm(&ax.modulus(), spec.target_q, &spec.target_measure)?;
    if (val - cert.value).abs() > 1e-10 * (1.0 + cert.value) {
        return Err(precondition("certificate value does not match its witness"));
    }
    if cert.field == Field::Real && !cert.witness.is_real() {
        return Err(precondition("real certificate carries a complex witness"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn two_by_two() -> CMatrix {
        CMatrix::from_rows(&[vec![1.0, -1.0], vec![1.0, 1.0]]).unwrap()
    }

    #[test]
    fn identity_two_two_norm_is_one() {
        let a = CMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let spec = OperatorSpec::counting(a, Exponent::Finite(2.0), Exponent::Finite(2.0));
        for field in [Field::Real, Field::Complex] {
            let cert = opnorm_exact(&spec, field).unwrap();
            assert_relative_eq!(cert.value, 1.0, max_relative = 1e-12);
            validate_certificate(&spec, &cert).unwrap();
        }
    }

    #[test]
    fn column_rule_on_weighted_source() {
        // p = 1 with source weights (2, 1): ratio at e_j is ||A e_j||_q / mu_j
        let a = CMatrix::from_rows(&[vec![3.0, 1.0], vec![4.0, 1.0]]).unwrap();
        let spec = OperatorSpec::new(
            a,
            Exponent::Finite(1.0),
            Exponent::Finite(2.0),
            DiscreteMeasure::new(vec![2.0, 1.0]).unwrap(),
            DiscreteMeasure::counting(2),
        )
        .unwrap();
        let cert = opnorm_exact(&spec, Field::Real).unwrap();
        // col 1: 5/2, col 2: sqrt(2)/1
        assert_relative_eq!(cert.value, 2.5, max_relative = 1e-12);
        validate_certificate(&spec, &cert).unwrap();
    }

    #[test]
    fn row_dual_on_sup_to_sup_pair() {
        // p = inf has dual 1, so the value is the largest row abs-sum
        let spec = OperatorSpec::counting(two_by_two(), Exponent::Inf, Exponent::Inf);
        let cert = opnorm_exact(&spec, Field::Complex).unwrap();
        assert_relative_eq!(cert.value, 2.0, max_relative = 1e-12);
        validate_certificate(&spec, &cert).unwrap();
    }

    #[test]
    fn row_dual_gated_for_real_field_on_complex_matrix() {
        let a = CMatrix::new(1, 2, vec![1.0, 0.0], vec![0.0, 1.0]).unwrap();
        let spec = OperatorSpec::counting(a, Exponent::Finite(2.0), Exponent::Inf);
        assert!(opnorm_exact(&spec, Field::Real).is_none());
        let c = opnorm_exact(&spec, Field::Complex).unwrap();
        assert_relative_eq!(c.value, 2.0_f64.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn spectral_norm_agrees_between_fields_for_real_matrix() {
        let a = CMatrix::from_rows(&[vec![2.0, 1.0], vec![0.0, 1.0], vec![1.0, -1.0]]).unwrap();
        let spec = OperatorSpec::counting(a, Exponent::Finite(2.0), Exponent::Finite(2.0));
        let r = opnorm_exact(&spec, Field::Real).unwrap();
        let c = opnorm_exact(&spec, Field::Complex).unwrap();
        assert_relative_eq!(r.value, c.value, max_relative = 1e-10);
        assert_relative_eq!(r.value, spec.matrix().sigma_max(), max_relative = 1e-10);
    }

    #[test]
    fn spectral_norm_real_field_complex_matrix_stacks_parts() {
        // B = [1 + i]: real-field (2,2) norm is sup |u| sqrt(1+1)/|u| = sqrt(2)
        let a = CMatrix::new(1, 1, vec![1.0], vec![1.0]).unwrap();
        let spec = OperatorSpec::counting(a, Exponent::Finite(2.0), Exponent::Finite(2.0));
        let r = opnorm_exact(&spec, Field::Real).unwrap();
        assert_relative_eq!(r.value, 2.0_f64.sqrt(), max_relative = 1e-12);
        assert!(r.witness.is_real());
    }

    #[test]
    fn no_closed_form_for_general_pair() {
        let spec = OperatorSpec::counting(two_by_two(), Exponent::Finite(3.0), Exponent::Finite(1.5));
        assert!(opnorm_exact(&spec, Field::Real).is_none());
    }

    #[test]
    fn transpose_spec_dualizes_exponents() {
        let spec = OperatorSpec::counting(two_by_two(), Exponent::Finite(4.0), Exponent::Finite(1.5));
        let t = transpose_spec(&spec).unwrap();
        assert_abs_diff_eq!(t.source_p().as_f64(), 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(t.target_q().as_f64(), 4.0 / 3.0, epsilon = 1e-12);
        assert_eq!(t.matrix().rows(), 2);

        let inf_spec = OperatorSpec::counting(two_by_two(), Exponent::Inf, Exponent::Finite(1.0));
        let t2 = transpose_spec(&inf_spec).unwrap();
        assert_eq!(t2.source_p(), Exponent::Inf);
        assert_eq!(t2.target_q(), Exponent::Finite(1.0));
    }

    #[test]
    fn transpose_spec_rejects_weights() {
        let spec = OperatorSpec::new(
            two_by_two(),
            Exponent::Finite(2.0),
            Exponent::Finite(2.0),
            DiscreteMeasure::new(vec![1.0, 2.0]).unwrap(),
            DiscreteMeasure::counting(2),
        )
        .unwrap();
        assert!(transpose_spec(&spec).is_err());
    }

    #[test]
    fn zero_matrix_certificate_is_zero() {
        let a = CMatrix::real(2, 2, vec![0.0; 4]).unwrap();
        let spec = OperatorSpec::counting(a, Exponent::Finite(1.0), Exponent::Finite(2.0));
        let cert = opnorm_exact(&spec, Field::Real).unwrap();
        assert_eq!(cert.value, 0.0);
        validate_certificate(&spec, &cert).unwrap();
    }
}
