//! Dense complex linear algebra.
//!
//! Every composite index follows the row-major convention: the basis vector
//! `e_i ⊗ f_j` of `H_a ⊗ H_b` sits at position `i * d_b + j`. Partial traces,
//! partial transposes, reshapes for Schmidt decompositions and the matrix file
//! format all inherit this ordering.

use std::ops::{Add, Deref, Mul, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Relative threshold for rank decisions: `σ_k` counts as nonzero iff
/// `σ_k > RANK_TOL * σ_1`.
pub const RANK_TOL: f64 = 1e-10;

/// Absolute floor used when the largest singular value is itself zero.
pub const RANK_ABS_FLOOR: f64 = 1e-14;

/// Relative Hermiticity tolerance accepted by [`hermitian_eig`].
pub const HERMITIAN_TOL: f64 = 1e-9;

/// A finite dense complex matrix with at least one row and one column.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    pub fn new(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() == 0 || m.ncols() == 0 {
            return Err(Error::DimensionMismatch(format!(
                "empty {}x{} matrix",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self(m))
    }

    /// Builds a matrix from row-major entries.
    pub fn from_row_slice(rows: usize, cols: usize, entries: &[C64]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Self::new(DMatrix::from_row_slice(rows, cols, entries))
    }

    pub fn from_real_rows(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        let z: Vec<C64> = entries.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::from_row_slice(rows, cols, &z)
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self(DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(diag[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }))
    }

    /// Rank-one projector `|v⟩⟨v|`. `v` is used as given, without normalization.
    pub fn outer(v: &DVector<C64>) -> Self {
        Self(v * v.adjoint())
    }

    /// Wraps a matrix produced by arithmetic on already-validated values.
    pub(crate) fn from_raw(m: DMatrix<C64>) -> Self {
        Self(m)
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn as_dmatrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<C64> {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(&self.0 * C64::new(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    /// `(M + M*) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self((&self.0 + self.0.adjoint()) * C64::new(0.5, 0.0))
    }

    /// Largest singular value.
    pub fn op_norm(&self) -> f64 {
        singular_values(&self.0).first().copied().unwrap_or(0.0)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `‖M − M*‖_op`.
    pub fn hermiticity_defect(&self) -> f64 {
        let diff = &self.0 - self.0.adjoint();
        if diff.iter().all(|z| *z == C64::new(0.0, 0.0)) {
            0.0
        } else {
            singular_values(&diff)[0]
        }
    }
}

impl Deref for ComplexMatrix {
    type Target = DMatrix<C64>;

    fn deref(&self) -> &DMatrix<C64> {
        &self.0
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues descending.
#[derive(Clone, Debug)]
pub struct HermitianSpectrum {
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, aligned with `eigenvalues`.
    pub eigenvectors: DMatrix<C64>,
}

impl HermitianSpectrum {
    pub fn eigenvector(&self, k: usize) -> DVector<C64> {
        self.eigenvectors.column(k).into_owned()
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    /// `U Λ U*`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.eigenvectors.nrows();
        let mut scaled = self.eigenvectors.clone();
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            scaled.column_mut(k).scale_mut(lambda);
        }
        debug_assert_eq!(scaled.nrows(), n);
        ComplexMatrix(&scaled * self.eigenvectors.adjoint())
    }
}

/// Thin singular value decomposition `M = U Σ V*`.
#[derive(Clone, Debug)]
pub struct Svd {
    /// `rows × k` with orthonormal columns, `k = min(rows, cols)`.
    pub left: DMatrix<C64>,
    /// Descending and nonnegative.
    pub singular_values: Vec<f64>,
    /// `cols × k` with orthonormal columns.
    pub right: DMatrix<C64>,
}

impl Svd {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let mut scaled = self.left.clone();
        for (k, &s) in self.singular_values.iter().enumerate() {
            scaled.column_mut(k).scale_mut(s);
        }
        ComplexMatrix(&scaled * self.right.adjoint())
    }

    pub fn rank(&self) -> usize {
        numerical_rank(&self.singular_values, RANK_TOL)
    }
}

/// Number of values with `σ_k > tol · σ_1`; when `σ_1 = 0` the absolute floor
/// [`RANK_ABS_FLOOR`] applies instead. Input must be sorted descending.
pub fn numerical_rank(singular_values: &[f64], tol: f64) -> usize {
    let cutoff = rank_cutoff(singular_values, tol);
    singular_values.iter().take_while(|&&s| s > cutoff).count()
}

pub(crate) fn rank_cutoff(singular_values: &[f64], tol: f64) -> f64 {
    match singular_values.first() {
        Some(&top) if top > 0.0 => tol * top,
        _ => RANK_ABS_FLOOR,
    }
}

/// Kronecker product; entry `(i·rows_b + k, j·cols_b + l)` is `a_ij · b_kl`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix(a.0.kronecker(&b.0))
}

/// Kronecker product of two column vectors.
pub fn kron_vec(a: &DVector<C64>, b: &DVector<C64>) -> DVector<C64> {
    let nb = b.len();
    DVector::from_fn(a.len() * nb, |i, _| a[i / nb] * b[i % nb])
}

/// Trace norm `‖C‖₁ = Tr|C|`, the sum of the singular values.
pub fn trace_norm(c: &ComplexMatrix) -> f64 {
    singular_values(&c.0).iter().sum()
}

/// Eigen-decomposition of a Hermitian matrix.
///
/// The input must satisfy `‖M − M*‖_op ≤ 1e-9 · (1 + ‖M‖_op)`; it is
/// symmetrized before decomposition so that roundoff asymmetry does not leak
/// into the spectrum.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianSpectrum> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigendecomposition of a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let defect = m.hermiticity_defect();
    if defect > 0.0 {
        let tolerance = HERMITIAN_TOL * (1.0 + m.op_norm());
        if defect > tolerance {
            return Err(Error::NotHermitian {
                deviation: defect,
                tolerance,
            });
        }
    }
    Ok(hermitian_eig_unchecked(&m.hermitian_part().0))
}

pub(crate) fn hermitian_eig_unchecked(m: &DMatrix<C64>) -> HermitianSpectrum {
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let eigenvectors = DMatrix::from_fn(m.nrows(), order.len(), |i, k| {
        eig.eigenvectors[(i, order[k])]
    });
    HermitianSpectrum {
        eigenvalues,
        eigenvectors,
    }
}

/// Thin SVD with singular values sorted descending.
///
/// Computed by one-sided Jacobi rotations rather than nalgebra's bidiagonal
/// QR, which loses accuracy on some rank-deficient complex inputs. Left
/// vectors paired with zero singular values are an orthonormal completion.
pub fn svd(m: &ComplexMatrix) -> Svd {
    if m.rows() < m.cols() {
        // A* = U' Σ V'*  ⇒  A = V' Σ U'*.
        let t = jacobi_svd(&m.0.adjoint());
        return Svd {
            left: t.2,
            singular_values: t.1,
            right: t.0,
        };
    }
    let (left, singular_values, right) = jacobi_svd(&m.0);
    Svd {
        left,
        singular_values,
        right,
    }
}

const JACOBI_MAX_SWEEPS: usize = 80;

/// One-sided Jacobi SVD of a tall (or square) matrix: `A = U Σ V*`.
fn jacobi_svd(a: &DMatrix<C64>) -> (DMatrix<C64>, Vec<f64>, DMatrix<C64>) {
    let (rows, n) = a.shape();
    debug_assert!(rows >= n);
    let mut w = a.clone();
    let mut v = DMatrix::<C64>::identity(n, n);
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = w.column(p).norm_squared();
                let beta = w.column(q).norm_squared();
                let gamma = w.column(p).dotc(&w.column(q));
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // Rotate column q by the phase of γ so the pair becomes real.
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for mat in [&mut w, &mut v] {
                    for i in 0..mat.nrows() {
                        let xp = mat[(i, p)];
                        let xq = mat[(i, q)] * phase;
                        mat[(i, p)] = xp * c - xq * s;
                        mat[(i, q)] = xp * s + xq * c;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<f64> = (0..n).map(|j| w.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));
    let singular_values: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let right = DMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    let cutoff = rank_cutoff(&singular_values, f64::EPSILON);
    let mut left: Vec<DVector<C64>> = Vec::with_capacity(n);
    for (j, &k) in order.iter().enumerate() {
        if singular_values[j] > cutoff {
            left.push(w.column(k).unscale(singular_values[j]));
        }
    }
    let mut e = 0;
    while left.len() < n && e < rows {
        let mut c = DVector::<C64>::zeros(rows);
        c[e] = C64::new(1.0, 0.0);
        e += 1;
        for _ in 0..2 {
            for q in &left {
                let proj = q.dotc(&c);
                c -= q * proj;
            }
        }
        let norm = c.norm();
        if norm > 1e-6 {
            left.push(c.unscale(norm));
        }
    }
    (DMatrix::from_columns(&left), singular_values, right)
}

fn singular_values(m: &DMatrix<C64>) -> Vec<f64> {
    let tall = if m.nrows() >= m.ncols() {
        jacobi_svd(m)
    } else {
        jacobi_svd(&m.adjoint())
    };
    tall.1
}

/// Splits a composite index into per-factor indices (row-major).
pub(crate) fn split_index(mut index: usize, dims: &[usize], out: &mut [usize]) {
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = index % d;
        index /= d;
    }
}

/// For every composite index, the pair (index over kept factors, index over
/// discarded factors).
pub(crate) fn kept_and_traced(dims: &[usize], keep: &[usize]) -> Vec<(usize, usize)> {
    let total: usize = dims.iter().product();
    let mut digits = vec![0; dims.len()];
    (0..total)
        .map(|i| {
            split_index(i, dims, &mut digits);
            let (mut kept, mut traced) = (0, 0);
            for (f, (&digit, &d)) in digits.iter().zip(dims).enumerate() {
                if keep.contains(&f) {
                    kept = kept * d + digit;
                } else {
                    traced = traced * d + digit;
                }
            }
            (kept, traced)
        })
        .collect()
}

pub(crate) fn validate_keep(dims: &[usize], keep: &[usize]) -> Result<Vec<usize>> {
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if let Some(&bad) = keep.iter().find(|&&f| f >= dims.len()) {
        return Err(Error::DimensionMismatch(format!(
            "factor {bad} out of range for {} factors",
            dims.len()
        )));
    }
    Ok(keep)
}

/// Traces out every factor not listed in `keep` (0-based factor indices).
///
/// The result acts on the kept factors in their original order; keeping no
/// factor yields the 1×1 matrix `[Tr m]`.
pub fn partial_trace(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    let total: usize = dims.iter().product();
    if dims.is_empty() || !m.is_square() || m.rows() != total {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix against factor dims {dims:?}",
            m.rows(),
            m.cols()
        )));
    }
    let keep = validate_keep(dims, keep)?;
    let kept_dim: usize = keep.iter().map(|&f| dims[f]).product();
    let map = kept_and_traced(dims, &keep);
    let mut out = DMatrix::zeros(kept_dim, kept_dim);
    for (i, &(ki, ti)) in map.iter().enumerate() {
        for (j, &(kj, tj)) in map.iter().enumerate() {
            if ti == tj {
                out[(ki, kj)] += m[(i, j)];
            }
        }
    }
    Ok(ComplexMatrix(out))
}

/// Which tensor factor of a bipartite space an operation acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Factor {
    First,
    Second,
}

/// Transposes the chosen factor of an operator on `H_a ⊗ H_b`.
pub fn partial_transpose(
    m: &ComplexMatrix,
    dims: (usize, usize),
    factor: Factor,
) -> Result<ComplexMatrix> {
    let (da, db) = dims;
    if !m.is_square() || m.rows() != da * db {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix against bipartite dims {da}x{db}",
            m.rows(),
            m.cols()
        )));
    }
    let n = da * db;
    let out = DMatrix::from_fn(n, n, |row, col| {
        let (i, k) = (row / db, row % db);
        let (j, l) = (col / db, col % db);
        match factor {
            Factor::First => m[(j * db + k, i * db + l)],
            Factor::Second => m[(i * db + l, j * db + k)],
        }
    });
    Ok(ComplexMatrix(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use nalgebra::dvector;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
        ComplexMatrix(DMatrix::from_fn(rows, cols, |_, _| {
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        }))
    }

    fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
        random_matrix(rng, n, n).hermitian_part()
    }

    #[test]
    fn kron_identity_and_diagonal() {
        assert_eq!(kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(2)), ComplexMatrix::identity(4));
        let a = ComplexMatrix::from_diagonal(&[1.0, 0.0]);
        let b = ComplexMatrix::from_diagonal(&[1.0, 1.0]);
        assert_eq!(kron(&a, &b), ComplexMatrix::from_diagonal(&[1.0, 1.0, 0.0, 0.0]));
    }

    #[test]
    fn kron_acts_factorwise_on_product_vectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = random_matrix(&mut rng, 2, 2);
        let b = random_matrix(&mut rng, 2, 2);
        let u = random_matrix(&mut rng, 2, 1).column(0).into_owned();
        let v = random_matrix(&mut rng, 2, 1).column(0).into_owned();
        let lhs = kron(&a, &b).as_dmatrix() * kron_vec(&u, &v);
        let rhs = kron_vec(&(a.as_dmatrix() * &u), &(b.as_dmatrix() * &v));
        // Oracle: explicit sum over the four factor indices.
        for i in 0..2 {
            for k in 0..2 {
                let mut direct = c(0.0);
                for j in 0..2 {
                    for l in 0..2 {
                        direct += a[(i, j)] * b[(k, l)] * u[j] * v[l];
                    }
                }
                assert!((lhs[i * 2 + k] - direct).norm() < 1e-12);
                assert!((rhs[i * 2 + k] - direct).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn kron_mixed_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let (a, b) = (random_matrix(&mut rng, 2, 3), random_matrix(&mut rng, 3, 2));
        let (p, q) = (random_matrix(&mut rng, 3, 2), random_matrix(&mut rng, 2, 4));
        let lhs = &kron(&a, &b) * &kron(&p, &q);
        let rhs = kron(&(&a * &p), &(&b * &q));
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn trace_norm_trivial_cases() {
        assert!((trace_norm(&ComplexMatrix::identity(2)) - 2.0).abs() < 1e-14);
        assert!((trace_norm(&ComplexMatrix::from_diagonal(&[0.5, -0.5])) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn trace_norm_of_hermitian_is_absolute_eigenvalue_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let h = random_hermitian(&mut rng, 4);
            let expected: f64 = oracle::hermitian_eigenvalues(h.as_dmatrix())
                .iter()
                .map(|x| x.abs())
                .sum();
            assert!((trace_norm(&h) - expected).abs() < 1e-10);
        }
    }

    #[test]
    fn trace_norm_matches_polar_form() {
        // ‖C‖₁ = |Tr(VC)| with V = W U* from C = U Σ W*.
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..10 {
            let m = random_matrix(&mut rng, 5, 5);
            let dec = svd(&m);
            let v = &dec.right * dec.left.adjoint();
            let polar = (v * m.as_dmatrix()).trace().norm();
            assert!((trace_norm(&m) - polar).abs() < 1e-10);
        }
    }

    #[test]
    fn hermitian_eig_small_cases() {
        let spec = hermitian_eig(&ComplexMatrix::from_diagonal(&[0.25, 0.75])).unwrap();
        assert_eq!(spec.eigenvalues.len(), 2);
        assert!((spec.eigenvalues[0] - 0.75).abs() < 1e-15);
        assert!((spec.eigenvalues[1] - 0.25).abs() < 1e-15);
        let x = ComplexMatrix::from_real_rows(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let spec = hermitian_eig(&x).unwrap();
        assert!((spec.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((spec.eigenvalues[1] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn hermitian_eig_reconstructs_and_matches_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let h = random_hermitian(&mut rng, 6);
        let spec = hermitian_eig(&h).unwrap();
        assert!((&spec.reconstruct() - &h).op_norm() <= 1e-9 * h.op_norm());
        let gram = spec.eigenvectors.adjoint() * &spec.eigenvectors;
        assert!((gram - DMatrix::<C64>::identity(6, 6)).norm() < 1e-10);
        for (a, b) in spec.eigenvalues.iter().zip(oracle::hermitian_eigenvalues(h.as_dmatrix())) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn hermitian_eig_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(hermitian_eig(&m), Err(Error::NotHermitian { .. })));
        let rect = ComplexMatrix::zeros(2, 3);
        assert!(matches!(hermitian_eig(&rect), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn hermitian_eig_tolerates_roundoff_asymmetry() {
        let mut m = ComplexMatrix::from_diagonal(&[1.0, 2.0]).into_dmatrix();
        m[(0, 1)] = C64::new(1e-13, 0.0);
        let spec = hermitian_eig(&ComplexMatrix::new(m).unwrap()).unwrap();
        assert!((spec.eigenvalues[0] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn svd_small_cases() {
        let dec = svd(&ComplexMatrix::from_diagonal(&[3.0, 4.0]));
        assert!((dec.singular_values[0] - 4.0).abs() < 1e-14);
        assert!((dec.singular_values[1] - 3.0).abs() < 1e-14);
        let dec = svd(&ComplexMatrix::zeros(3, 2));
        assert!(dec.singular_values.iter().all(|&s| s == 0.0));
        assert_eq!(dec.rank(), 0);
    }

    #[test]
    fn svd_reconstructs_rectangular() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for (r, c) in [(4, 6), (6, 4), (1, 5), (7, 7)] {
            let m = random_matrix(&mut rng, r, c);
            let dec = svd(&m);
            assert!(dec.singular_values.windows(2).all(|w| w[0] >= w[1]));
            assert!((&dec.reconstruct() - &m).op_norm() <= 1e-9 * m.op_norm());
        }
    }

    #[test]
    fn svd_rank_deficient_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for trial in 0..3000 {
            let rank = 1 + trial % 3;
            let mut m = ComplexMatrix::zeros(4, 4);
            for _ in 0..rank {
                let x = random_matrix(&mut rng, 4, 1);
                let y = random_matrix(&mut rng, 1, 4);
                m = &m + &(&x * &y);
            }
            let dec = svd(&m);
            assert!((&dec.reconstruct() - &m).frobenius_norm() <= 1e-12 * m.frobenius_norm());
            let gram = dec.left.adjoint() * &dec.left;
            assert!((gram - DMatrix::identity(4, 4)).norm() <= 1e-12);
            assert_eq!(dec.rank(), rank);
        }
    }

    #[test]
    fn numerical_rank_thresholds() {
        assert_eq!(numerical_rank(&[1.0, 1e-9, 1e-11], RANK_TOL), 2);
        assert_eq!(numerical_rank(&[0.0, 0.0], RANK_TOL), 0);
        assert_eq!(numerical_rank(&[], RANK_TOL), 0);
    }

    #[test]
    fn partial_trace_product_and_full() {
        let rho = ComplexMatrix::from_diagonal(&[0.3, 0.7]);
        let sigma = ComplexMatrix::from_real_rows(3, 3, &[0.2, 0.1, 0.0, 0.1, 0.5, 0.0, 0.0, 0.0, 0.3]).unwrap();
        let joint = kron(&rho, &sigma);
        let first = partial_trace(&joint, &[2, 3], &[0]).unwrap();
        assert!(first.max_abs_diff(&rho) < 1e-15);
        let second = partial_trace(&joint, &[2, 3], &[1]).unwrap();
        assert!(second.max_abs_diff(&sigma) < 1e-15);
        let all = partial_trace(&joint, &[2, 3], &[]).unwrap();
        assert_eq!((all.rows(), all.cols()), (1, 1));
        assert!((all[(0, 0)] - joint.trace()).norm() < 1e-15);
    }

    #[test]
    fn partial_trace_of_bell_projector() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = ComplexMatrix::outer(&dvector![c(s), c(0.0), c(0.0), c(s)]);
        let reduced = partial_trace(&bell, &[2, 2], &[0]).unwrap();
        // Oracle: ρ_ij = Σ_k m[(i,k),(j,k)].
        for i in 0..2 {
            for j in 0..2 {
                let direct: C64 = (0..2).map(|k| bell[(i * 2 + k, j * 2 + k)]).sum();
                assert!((reduced[(i, j)] - direct).norm() < 1e-15);
            }
        }
        assert!(reduced.max_abs_diff(&ComplexMatrix::from_diagonal(&[0.5, 0.5])) < 1e-15);
    }

    #[test]
    fn partial_trace_middle_factor_of_three() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let a = random_hermitian(&mut rng, 2);
        let b = ComplexMatrix::from_diagonal(&[0.25, 0.75]);
        let cc = random_hermitian(&mut rng, 3);
        let joint = kron(&kron(&a, &b), &cc);
        let kept = partial_trace(&joint, &[2, 2, 3], &[2, 0]).unwrap();
        assert!(kept.max_abs_diff(&kron(&a, &cc)) < 1e-13);
    }

    #[test]
    fn partial_trace_dimension_errors() {
        let m = ComplexMatrix::identity(4);
        assert!(partial_trace(&m, &[2, 3], &[0]).is_err());
        assert!(partial_trace(&m, &[2, 2], &[2]).is_err());
    }

    #[test]
    fn partial_transpose_product_involution_and_bell() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        let rho = random_matrix(&mut rng, 2, 2);
        let sigma = random_matrix(&mut rng, 3, 3);
        let joint = kron(&rho, &sigma);
        let pt = partial_transpose(&joint, (2, 3), Factor::Second).unwrap();
        assert!(pt.max_abs_diff(&kron(&rho, &sigma.transpose())) < 1e-15);
        let pt1 = partial_transpose(&joint, (2, 3), Factor::First).unwrap();
        assert!(pt1.max_abs_diff(&kron(&rho.transpose(), &sigma)) < 1e-15);
        let twice = partial_transpose(&pt, (2, 3), Factor::Second).unwrap();
        assert_eq!(twice, joint);

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = ComplexMatrix::outer(&dvector![c(s), c(0.0), c(0.0), c(s)]);
        let pt = partial_transpose(&bell, (2, 2), Factor::Second).unwrap();
        let min = oracle::hermitian_eigenvalues(pt.as_dmatrix())
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        assert!((min + 0.5).abs() < 1e-12);
        assert!(partial_transpose(&bell, (2, 3), Factor::Second).is_err());
    }
}
