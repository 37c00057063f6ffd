//! The concrete ordered algebra: real symmetric `n × n` matrices under the
//! Loewner order (`a ≤ b` iff `b − a` is positive semidefinite), with the
//! identity as order unit.
//!
//! Products of two symmetric matrices generally leave the symmetric space;
//! they are returned as [`GenMatrix`], and a product is symmetric exactly
//! when its factors commute.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Cholesky, DMatrix};
use serde::{Deserialize, Serialize};

use crate::error::{check_dims, MsrError, Result};

/// Largest supported dimension.
pub const MAX_DIM: usize = 64;

/// Numerical tolerances shared by every check.
///
/// All of them are relative: callers scale by `max(1, ‖·‖)` of the
/// quantity being judged.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// Largest asymmetry accepted (and removed) at ingestion.
    pub sym_tol: f64,
    /// Slack allowed below zero when judging positive semidefiniteness.
    pub psd_tol: f64,
    /// Slack on `‖ab − ba‖_max` when deciding commutation.
    pub commute_tol: f64,
    /// Slack on `‖p² − p‖` when validating projections.
    pub proj_tol: f64,
    /// Eigenvalues closer than this (relative) share a joint eigenspace.
    pub cluster_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            sym_tol: 1e-9,
            psd_tol: 1e-9,
            commute_tol: 1e-9,
            proj_tol: 1e-9,
            cluster_tol: 1e-8,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        let all = [
            ("sym_tol", self.sym_tol),
            ("psd_tol", self.psd_tol),
            ("commute_tol", self.commute_tol),
            ("proj_tol", self.proj_tol),
            ("cluster_tol", self.cluster_tol),
        ];
        for (name, v) in all {
            if !(v.is_finite() && v >= 0.0) {
                return Err(MsrError::Input(format!("{name} must be a nonnegative real, got {v}")));
            }
        }
        Ok(())
    }

    /// Same tolerances with a different PSD slack.
    pub fn with_psd_tol(mut self, psd_tol: f64) -> Self {
        self.psd_tol = psd_tol;
        self
    }
}

/// Outcome of a Loewner-order verification.
///
/// `margin` is the raw minimum eigenvalue of the difference being judged, so
/// callers can re-judge with their own threshold. The verdict is
/// `margin >= -threshold`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderCheckReport {
    pub holds: bool,
    pub margin: f64,
    pub threshold: f64,
}

impl OrderCheckReport {
    pub fn from_margin(margin: f64, threshold: f64) -> Self {
        Self {
            holds: margin >= -threshold,
            margin,
            threshold,
        }
    }
}

/// An element of the algebra: a real symmetric matrix with finite entries.
///
/// Symmetry is exact: every constructor stores `(m + mᵀ)/2`.
#[derive(Clone, PartialEq)]
pub struct SymMatrix {
    m: DMatrix<f64>,
}

impl fmt::Debug for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SymMatrix")
            .field("n", &self.n())
            .field("rows", &self.rows())
            .finish()
    }
}

fn validate_shape(rows: usize, cols: usize) -> Result<()> {
    if rows != cols {
        return Err(MsrError::Input(format!("matrix must be square, got {rows}x{cols}")));
    }
    if rows == 0 || rows > MAX_DIM {
        return Err(MsrError::Input(format!(
            "dimension must be in 1..={MAX_DIM}, got {rows}"
        )));
    }
    Ok(())
}

fn exact_symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            m[(i, i)]
        } else {
            0.5 * (m[(i, j)] + m[(j, i)])
        }
    })
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

fn max_asymmetry(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

impl SymMatrix {
    /// Ingests a square matrix, symmetrizing it when its asymmetry is within
    /// `sym_tol · max(1, max|entry|)`.
    pub fn from_matrix_with(m: DMatrix<f64>, cfg: &ToleranceConfig) -> Result<Self> {
        validate_shape(m.nrows(), m.ncols())?;
        if let Some(bad) = m.iter().find(|x| !x.is_finite()) {
            return Err(MsrError::Input(format!("non-finite entry {bad}")));
        }
        let asym = max_asymmetry(&m);
        let allowed = cfg.sym_tol * max_abs(&m).max(1.0);
        if asym > allowed {
            return Err(MsrError::Input(format!(
                "matrix is not symmetric (asymmetry {asym:e} exceeds {allowed:e})"
            )));
        }
        Ok(Self {
            m: exact_symmetrize(&m),
        })
    }

    pub fn from_matrix(m: DMatrix<f64>) -> Result<Self> {
        Self::from_matrix_with(m, &ToleranceConfig::default())
    }

    pub fn from_row_major(n: usize, data: &[f64]) -> Result<Self> {
        if data.len() != n * n {
            return Err(MsrError::Input(format!(
                "expected {} entries for n = {n}, got {}",
                n * n,
                data.len()
            )));
        }
        validate_shape(n, n)?;
        Self::from_matrix(DMatrix::from_row_slice(n, n, data))
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            let row = row.as_ref();
            if row.len() != n {
                return Err(MsrError::Input(format!(
                    "row of length {} in a {n}-row matrix",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Self::from_row_major(n, &data)
    }

    /// Wraps a result that is symmetric up to rounding (products of
    /// commuting factors, `QΛQᵀ`, ...). Asymmetry is averaged away without a
    /// tolerance check.
    pub(crate) fn from_nearly_symmetric(m: DMatrix<f64>) -> Self {
        debug_assert_eq!(m.nrows(), m.ncols());
        Self {
            m: exact_symmetrize(&m),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, 1.0)
    }

    pub fn zeros(n: usize) -> Self {
        Self::scalar(n, 0.0)
    }

    /// `λ·1`
    pub fn scalar(n: usize, lambda: f64) -> Self {
        Self {
            m: DMatrix::from_diagonal_element(n, n, lambda),
        }
    }

    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        Self {
            m: DMatrix::from_fn(n, n, |i, j| if i == j { values[i] } else { 0.0 }),
        }
    }

    /// `v vᵀ`
    pub fn outer(v: &[f64]) -> Self {
        let n = v.len();
        Self {
            m: DMatrix::from_fn(n, n, |i, j| v[i] * v[j]),
        }
    }

    pub fn n(&self) -> usize {
        self.m.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[(i, j)]
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.m
    }

    pub fn to_row_major(&self) -> Vec<f64> {
        let n = self.n();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| self.m[(i, j)])
            .collect()
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n())
            .map(|i| (0..self.n()).map(|j| self.m[(i, j)]).collect())
            .collect()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n()).map(|i| self.m[(i, i)]).collect()
    }

    pub fn trace(&self) -> f64 {
        self.m.trace()
    }

    /// Trace inner product `trace(a b)`.
    pub fn inner(&self, other: &SymMatrix) -> f64 {
        self.m.component_mul(&other.m).sum()
    }

    pub fn max_abs_entry(&self) -> f64 {
        max_abs(&self.m)
    }

    /// Largest absolute entry of `self − other`.
    pub fn max_abs_diff(&self, other: &SymMatrix) -> f64 {
        max_abs(&(&self.m - &other.m))
    }

    pub fn scale(&self, s: f64) -> SymMatrix {
        Self { m: &self.m * s }
    }

    /// `a + λ·1`
    pub fn shift(&self, lambda: f64) -> SymMatrix {
        let mut m = self.m.clone();
        for i in 0..self.n() {
            m[(i, i)] += lambda;
        }
        Self { m }
    }

    /// Product in the enveloping (full matrix) algebra.
    pub fn product(&self, other: &SymMatrix) -> GenMatrix {
        GenMatrix { m: &self.m * &other.m }
    }

    /// `a²`, which is always symmetric.
    pub fn square(&self) -> SymMatrix {
        Self::from_nearly_symmetric(&self.m * &self.m)
    }

    pub fn eig(&self) -> EigDecomposition {
        EigDecomposition::new(self)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut values: Vec<f64> = self.m.clone().symmetric_eigenvalues().iter().copied().collect();
        values.sort_by(f64::total_cmp);
        values
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigenvalues().last().expect("nonempty")
    }

    /// `a ≥ 0` under the default tolerance.
    pub fn is_psd(&self) -> bool {
        is_psd(self, &ToleranceConfig::default())
    }

    pub fn norm(&self) -> f64 {
        order_unit_norm(self)
    }

    pub fn sqrt(&self) -> Result<SymMatrix> {
        sqrt_spectral(self, &ToleranceConfig::default())
    }

    pub fn inverse(&self) -> Result<SymMatrix> {
        inverse(self, &ToleranceConfig::default())
    }
}

impl Add for &SymMatrix {
    type Output = SymMatrix;
    fn add(self, rhs: &SymMatrix) -> SymMatrix {
        assert_eq!(self.n(), rhs.n(), "dimension mismatch in addition");
        SymMatrix { m: &self.m + &rhs.m }
    }
}

impl Sub for &SymMatrix {
    type Output = SymMatrix;
    fn sub(self, rhs: &SymMatrix) -> SymMatrix {
        assert_eq!(self.n(), rhs.n(), "dimension mismatch in subtraction");
        SymMatrix { m: &self.m - &rhs.m }
    }
}

impl Neg for &SymMatrix {
    type Output = SymMatrix;
    fn neg(self) -> SymMatrix {
        SymMatrix { m: -&self.m }
    }
}

impl Mul<f64> for &SymMatrix {
    type Output = SymMatrix;
    fn mul(self, rhs: f64) -> SymMatrix {
        self.scale(rhs)
    }
}

/// An element of the enveloping algebra: any square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GenMatrix {
    m: DMatrix<f64>,
}

impl GenMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        validate_shape(m.nrows(), m.ncols())?;
        if m.iter().any(|x| !x.is_finite()) {
            return Err(MsrError::Input("non-finite entry".into()));
        }
        Ok(Self { m })
    }

    pub fn n(&self) -> usize {
        self.m.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[(i, j)]
    }

    pub fn transpose(&self) -> GenMatrix {
        GenMatrix { m: self.m.transpose() }
    }

    /// `max |m_ij − m_ji|`
    pub fn asymmetry(&self) -> f64 {
        max_asymmetry(&self.m)
    }

    pub fn max_abs_entry(&self) -> f64 {
        max_abs(&self.m)
    }

    /// Symmetric part `(m + mᵀ)/2`, whatever the asymmetry.
    pub fn symmetric_part(&self) -> SymMatrix {
        SymMatrix::from_nearly_symmetric(self.m.clone())
    }

    /// Accepts the product as an algebra element when it is symmetric
    /// within the ingestion tolerance.
    pub fn to_sym(&self, cfg: &ToleranceConfig) -> Result<SymMatrix> {
        SymMatrix::from_matrix_with(self.m.clone(), cfg)
    }
}

/// Spectral decomposition `a = Q diag(λ) Qᵀ`.
///
/// Eigenvalues ascend. Each eigenvector is normalized so that its first
/// component of magnitude above `1e-10` is positive; exact eigenvalue ties
/// are ordered by the normalized vectors, lexicographically descending.
#[derive(Debug, Clone)]
pub struct EigDecomposition {
    vectors: DMatrix<f64>,
    values: Vec<f64>,
}

impl EigDecomposition {
    pub fn new(a: &SymMatrix) -> Self {
        let n = a.n();
        let raw = a.m.clone().symmetric_eigen();
        let mut pairs: Vec<(f64, Vec<f64>)> = (0..n)
            .map(|k| {
                let mut v: Vec<f64> = raw.eigenvectors.column(k).iter().copied().collect();
                normalize_sign(&mut v);
                (raw.eigenvalues[k], v)
            })
            .collect();
        pairs.sort_by(|(la, va), (lb, vb)| la.total_cmp(lb).then_with(|| lex_desc(va, vb)));
        let values = pairs.iter().map(|(l, _)| *l).collect();
        let vectors = DMatrix::from_fn(n, n, |i, k| pairs[k].1[i]);
        Self { vectors, values }
    }

    /// Ascending eigenvalues.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Orthogonal matrix whose columns are the eigenvectors.
    pub fn vectors(&self) -> &DMatrix<f64> {
        &self.vectors
    }

    pub fn vector(&self, k: usize) -> Vec<f64> {
        self.vectors.column(k).iter().copied().collect()
    }

    /// `Q diag(f(λ)) Qᵀ`
    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> SymMatrix {
        let scaled = DMatrix::from_fn(self.values.len(), self.values.len(), |i, k| {
            self.vectors[(i, k)] * f(self.values[k])
        });
        SymMatrix::from_nearly_symmetric(&scaled * self.vectors.transpose())
    }

    pub fn reconstruct(&self) -> SymMatrix {
        self.map(|l| l)
    }

    /// `‖QᵀQ − I‖_max`
    pub fn orthogonality_residual(&self) -> f64 {
        let n = self.values.len();
        let qtq = self.vectors.transpose() * &self.vectors;
        max_abs(&(qtq - DMatrix::identity(n, n)))
    }
}

pub(crate) fn normalize_sign(v: &mut [f64]) {
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-10) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

pub(crate) fn lex_desc(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match y.total_cmp(x) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// Order-unit norm `inf{λ > 0 : −λ ≤ a ≤ λ}`, i.e. the largest absolute
/// eigenvalue.
pub fn order_unit_norm(a: &SymMatrix) -> f64 {
    let values = a.eigenvalues();
    values[0].abs().max(values[values.len() - 1].abs())
}

/// Smallest eigenvalue of `a`, the PSD margin.
pub fn psd_margin(a: &SymMatrix) -> f64 {
    a.min_eigenvalue()
}

pub fn is_psd(a: &SymMatrix, cfg: &ToleranceConfig) -> bool {
    let values = a.eigenvalues();
    let norm = values[0].abs().max(values[values.len() - 1].abs());
    values[0] >= -cfg.psd_tol * norm.max(1.0)
}

/// `a ≤ b` in the Loewner order.
pub fn loewner_leq(a: &SymMatrix, b: &SymMatrix, cfg: &ToleranceConfig) -> Result<OrderCheckReport> {
    check_dims(a.n(), b.n())?;
    let diff = b - a;
    let values = diff.eigenvalues();
    let norm = values[0].abs().max(values[values.len() - 1].abs());
    Ok(OrderCheckReport::from_margin(values[0], cfg.psd_tol * norm.max(1.0)))
}

/// Unique PSD square root, through the spectral decomposition.
///
/// Negative eigenvalues within `psd_tol · max(1, ‖a‖)` of zero are clamped.
pub fn sqrt_spectral(a: &SymMatrix, cfg: &ToleranceConfig) -> Result<SymMatrix> {
    let eig = a.eig();
    let values = eig.values();
    let norm = values[0].abs().max(values[values.len() - 1].abs());
    let allowed = cfg.psd_tol * norm.max(1.0);
    if values[0] < -allowed {
        return Err(MsrError::NotPositive {
            min_eigenvalue: values[0],
            allowed,
        });
    }
    Ok(eig.map(|l| l.max(0.0).sqrt()))
}

/// `|a| = (a²)^{1/2}`, computed as `Q |Λ| Qᵀ`.
pub fn abs(a: &SymMatrix) -> SymMatrix {
    a.eig().map(f64::abs)
}

/// The quadratic map `b ↦ a b a`.
pub fn quadratic_map(a: &SymMatrix, b: &SymMatrix) -> Result<SymMatrix> {
    check_dims(a.n(), b.n())?;
    Ok(SymMatrix::from_nearly_symmetric(&a.m * &b.m * &a.m))
}

/// Largest `ε` with `ε ≤ |a|`: the smallest absolute eigenvalue.
pub fn invertibility_margin(a: &SymMatrix) -> f64 {
    a.eigenvalues().iter().fold(f64::INFINITY, |acc, l| acc.min(l.abs()))
}

/// Inverse through a Cholesky factorization when `a` is positive definite,
/// LU otherwise.
pub fn inverse(a: &SymMatrix, cfg: &ToleranceConfig) -> Result<SymMatrix> {
    let margin = invertibility_margin(a);
    if margin <= cfg.psd_tol * order_unit_norm(a).max(1.0) {
        return Err(MsrError::NotInvertible { margin });
    }
    let inv = match Cholesky::new(a.m.clone()) {
        Some(chol) => chol.inverse(),
        None => a.m.clone().try_inverse().ok_or(MsrError::NotInvertible { margin })?,
    };
    Ok(SymMatrix::from_nearly_symmetric(inv))
}

/// A validated idempotent `p = p²`.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    p: SymMatrix,
}

impl Projection {
    pub fn matrix(&self) -> &SymMatrix {
        &self.p
    }

    pub fn n(&self) -> usize {
        self.p.n()
    }

    pub fn rank(&self) -> usize {
        self.p.trace().round() as usize
    }

    /// `p^⊥ = 1 − p`
    pub fn complement(&self) -> Projection {
        Projection {
            p: &SymMatrix::identity(self.n()) - &self.p,
        }
    }

    /// Meet `pq` of two commuting projections.
    pub fn meet(&self, other: &Projection, cfg: &ToleranceConfig) -> Result<Projection> {
        self.require_commuting(other, cfg)?;
        projection_check(&self.p.product(&other.p).symmetric_part(), cfg)
    }

    /// Join `p + q − pq` of two commuting projections.
    pub fn join(&self, other: &Projection, cfg: &ToleranceConfig) -> Result<Projection> {
        self.require_commuting(other, cfg)?;
        let pq = self.p.product(&other.p).symmetric_part();
        projection_check(&(&(&self.p + &other.p) - &pq), cfg)
    }

    fn require_commuting(&self, other: &Projection, cfg: &ToleranceConfig) -> Result<()> {
        check_dims(self.n(), other.n())?;
        let pq = self.p.product(&other.p);
        let residual = max_abs(&(&pq.m - pq.m.transpose()));
        if residual > cfg.commute_tol {
            return Err(MsrError::NonCommuting {
                first: 0,
                second: 1,
                residual,
            });
        }
        Ok(())
    }
}

/// Validates `p² = p` (within `proj_tol` in the order-unit norm) and that
/// the spectrum sits within `proj_tol` of `{0, 1}`.
pub fn projection_check(p: &SymMatrix, cfg: &ToleranceConfig) -> Result<Projection> {
    let residual = order_unit_norm(&(&p.square() - p));
    if residual > cfg.proj_tol {
        return Err(MsrError::NotProjection { residual });
    }
    let spectral = p
        .eigenvalues()
        .iter()
        .map(|l| l.abs().min((l - 1.0).abs()))
        .fold(0.0_f64, f64::max);
    if spectral > cfg.proj_tol {
        return Err(MsrError::NotProjection { residual: spectral });
    }
    Ok(Projection { p: p.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn m(rows: &[&[f64]]) -> SymMatrix {
        SymMatrix::from_rows(rows).unwrap()
    }

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    // Eigenvalues of [[p, q], [q, r]] from the characteristic polynomial.
    fn eig2(a: &SymMatrix) -> (f64, f64) {
        let (p, q, r) = (a.get(0, 0), a.get(0, 1), a.get(1, 1));
        let mean = 0.5 * (p + r);
        let rad = (0.25 * (p - r) * (p - r) + q * q).sqrt();
        (mean - rad, mean + rad)
    }

    #[test]
    fn symmetrization_policy() {
        let nearly = DMatrix::from_row_slice(2, 2, &[1.0, 2.0 + 1e-12, 2.0, 3.0]);
        let a = SymMatrix::from_matrix(nearly).unwrap();
        assert_eq!(a.get(0, 1), a.get(1, 0));

        let skew = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.1, 3.0]);
        assert!(matches!(SymMatrix::from_matrix(skew), Err(MsrError::Input(_))));

        let nan = DMatrix::from_row_slice(1, 1, &[f64::NAN]);
        assert!(SymMatrix::from_matrix(nan).is_err());
        assert!(SymMatrix::from_row_major(2, &[1.0, 2.0, 3.0]).is_err());
        assert!(SymMatrix::from_row_major(0, &[]).is_err());
    }

    #[test]
    fn order_unit_norm_examples() {
        assert_eq!(order_unit_norm(&SymMatrix::identity(3)), 1.0);
        assert_abs_diff_eq!(order_unit_norm(&SymMatrix::diag(&[1.0, -2.0])), 2.0, epsilon = 1e-15);
        let swap = m(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let (lo, hi) = eig2(&swap);
        assert_abs_diff_eq!(order_unit_norm(&swap), lo.abs().max(hi.abs()), epsilon = 1e-15);
        assert_abs_diff_eq!(order_unit_norm(&swap), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn loewner_examples() {
        let r = loewner_leq(&SymMatrix::diag(&[1.0, 0.0]), &SymMatrix::diag(&[2.0, 1.0]), &cfg()).unwrap();
        assert!(r.holds);
        assert_abs_diff_eq!(r.margin, 1.0, epsilon = 1e-15);

        let a = m(&[&[1.0, 1.0], &[1.0, 1.0]]);
        let b = m(&[&[2.0, 1.0], &[1.0, 1.0]]);
        let r = loewner_leq(&a, &b, &cfg()).unwrap();
        assert!(r.holds);
        assert_abs_diff_eq!(r.margin, 0.0, epsilon = 1e-15);

        let r = loewner_leq(&SymMatrix::diag(&[2.0]), &SymMatrix::diag(&[1.0]), &cfg()).unwrap();
        assert!(!r.holds);
        assert_abs_diff_eq!(r.margin, -1.0, epsilon = 1e-15);

        assert!(matches!(
            loewner_leq(&SymMatrix::identity(2), &SymMatrix::identity(3), &cfg()),
            Err(MsrError::DimensionMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn sqrt_examples() {
        let r = sqrt_spectral(&SymMatrix::diag(&[4.0, 9.0]), &cfg()).unwrap();
        assert!(r.max_abs_diff(&SymMatrix::diag(&[2.0, 3.0])) < 1e-14);

        // 2x2 closed form: sqrt(b) = (b + sqrt(det) I) / sqrt(tr + 2 sqrt(det)).
        let b = m(&[&[2.0, 1.0], &[1.0, 1.0]]);
        let det: f64 = 2.0 * 1.0 - 1.0;
        let tr = 3.0;
        let closed = b.shift(det.sqrt()).scale(1.0 / (tr + 2.0 * det.sqrt()).sqrt());
        let expected = m(&[&[3.0, 1.0], &[1.0, 2.0]]).scale(1.0 / 5f64.sqrt());
        assert!(closed.max_abs_diff(&expected) < 1e-15);
        let r = sqrt_spectral(&b, &cfg()).unwrap();
        assert!(r.max_abs_diff(&expected) < 1e-14);
        assert!(r.square().max_abs_diff(&b) < 1e-14);

        let z = sqrt_spectral(&SymMatrix::zeros(3), &cfg()).unwrap();
        assert_eq!(z.max_abs_entry(), 0.0);
    }

    #[test]
    fn sqrt_rejects_negative_and_clamps_rounding() {
        let err = sqrt_spectral(&SymMatrix::diag(&[1.0, -0.5]), &cfg()).unwrap_err();
        assert!(matches!(err, MsrError::NotPositive { .. }));
        let r = sqrt_spectral(&SymMatrix::diag(&[1.0, -1e-12]), &cfg()).unwrap();
        assert_eq!(r.get(1, 1), 0.0);
    }

    #[test]
    fn abs_examples() {
        assert!(abs(&SymMatrix::diag(&[1.0, -2.0])).max_abs_diff(&SymMatrix::diag(&[1.0, 2.0])) < 1e-15);
        let psd = m(&[&[2.0, 1.0], &[1.0, 1.0]]);
        assert!(abs(&psd).max_abs_diff(&psd) < 1e-9);
        let swap = m(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let via_square = sqrt_spectral(&swap.square(), &cfg()).unwrap();
        assert!(via_square.max_abs_diff(&SymMatrix::identity(2)) < 1e-14);
        assert!(abs(&swap).max_abs_diff(&SymMatrix::identity(2)) < 1e-14);
        // a ∈ A⁺ iff a = |a|
        assert!(abs(&swap).max_abs_diff(&swap) > 0.5);
    }

    #[test]
    fn quadratic_map_examples() {
        let r = quadratic_map(&SymMatrix::diag(&[1.0, 2.0]), &m(&[&[0.0, 1.0], &[1.0, 0.0]])).unwrap();
        assert_eq!(r, m(&[&[0.0, 2.0], &[2.0, 0.0]]));
        let b = m(&[&[3.0, -1.0], &[-1.0, 5.0]]);
        assert_eq!(quadratic_map(&SymMatrix::identity(2), &b).unwrap(), b);
        assert!(quadratic_map(&SymMatrix::identity(2), &SymMatrix::identity(3)).is_err());
    }

    #[test]
    fn inverse_examples() {
        let a = m(&[&[2.0, 1.0], &[1.0, 1.0]]);
        let inv = inverse(&a, &cfg()).unwrap();
        assert!(inv.max_abs_diff(&m(&[&[1.0, -1.0], &[-1.0, 2.0]])) < 1e-14);
        let prod = a.product(&inv);
        assert!((prod.as_matrix() - DMatrix::<f64>::identity(2, 2)).amax() < 1e-14);
        assert_eq!(
            inverse(&SymMatrix::identity(3), &cfg()).unwrap(),
            SymMatrix::identity(3)
        );
        match inverse(&SymMatrix::diag(&[1.0, 0.0]), &cfg()) {
            Err(MsrError::NotInvertible { margin }) => assert_eq!(margin, 0.0),
            other => panic!("expected not-invertible, got {other:?}"),
        }
        // Indefinite input falls back to LU.
        let inv = inverse(&SymMatrix::diag(&[3.0, -2.0]), &cfg()).unwrap();
        assert!(inv.max_abs_diff(&SymMatrix::diag(&[1.0 / 3.0, -0.5])) < 1e-15);
    }

    #[test]
    fn invertibility_margin_examples() {
        assert_eq!(invertibility_margin(&SymMatrix::diag(&[3.0, -2.0])), 2.0);
        assert_abs_diff_eq!(
            invertibility_margin(&m(&[&[1.0, 1.0], &[1.0, 1.0]])),
            0.0,
            epsilon = 1e-15
        );
        let shifted = &SymMatrix::identity(2) + &SymMatrix::diag(&[1.0, 2.0]);
        assert_eq!(invertibility_margin(&shifted), 2.0);
    }

    #[test]
    fn projection_examples() {
        let p = projection_check(&SymMatrix::diag(&[1.0, 0.0]), &cfg()).unwrap();
        assert_eq!(p.complement().matrix(), &SymMatrix::diag(&[0.0, 1.0]));
        let half = m(&[&[0.5, 0.5], &[0.5, 0.5]]);
        assert!(half.square().max_abs_diff(&half) < 1e-16);
        let p = projection_check(&half, &cfg()).unwrap();
        assert_eq!(p.rank(), 1);
        assert!(matches!(
            projection_check(&SymMatrix::diag(&[0.5, 0.0]), &cfg()),
            Err(MsrError::NotProjection { .. })
        ));
    }

    #[test]
    fn commuting_projection_lattice() {
        let p = projection_check(&SymMatrix::diag(&[1.0, 1.0, 0.0]), &cfg()).unwrap();
        let q = projection_check(&SymMatrix::diag(&[0.0, 1.0, 1.0]), &cfg()).unwrap();
        assert_eq!(p.meet(&q, &cfg()).unwrap().matrix(), &SymMatrix::diag(&[0.0, 1.0, 0.0]));
        assert_eq!(p.join(&q, &cfg()).unwrap().matrix(), &SymMatrix::identity(3));
        let r = projection_check(&m(&[&[0.5, 0.5], &[0.5, 0.5]]), &cfg()).unwrap();
        let s = projection_check(&SymMatrix::diag(&[1.0, 0.0]), &cfg()).unwrap();
        assert!(matches!(r.meet(&s, &cfg()), Err(MsrError::NonCommuting { .. })));
    }

    #[test]
    fn eig_contract() {
        let a = m(&[&[4.0, 1.0, -2.0], &[1.0, 0.0, 3.0], &[-2.0, 3.0, 1.0]]);
        let e = a.eig();
        assert!(e.values().windows(2).all(|w| w[0] <= w[1]));
        assert!(e.orthogonality_residual() < 1e-10);
        assert!(e.reconstruct().max_abs_diff(&a) < 1e-9 * order_unit_norm(&a).max(1.0));
        for k in 0..3 {
            let v = e.vector(k);
            let first = v.iter().find(|x| x.abs() > 1e-10).unwrap();
            assert!(*first > 0.0);
        }
    }
}
