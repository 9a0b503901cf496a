//! Test-only reference routines, written independently of the nalgebra-backed
//! kernels they check. Shared with the integration tests through `#[path]`.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Eigenvalues (descending) of a real symmetric matrix by cyclic Jacobi
/// rotations.
pub fn symmetric_jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    eig.sort_by(|x, y| y.total_cmp(x));
    eig
}

/// Eigenvalues (descending) of a Hermitian matrix `H = A + iB`, read off the
/// real symmetric embedding `[[A, -B], [B, A]]`, whose spectrum is that of `H`
/// with every eigenvalue doubled.
pub fn hermitian_eigenvalues(h: &DMatrix<Complex64>) -> Vec<f64> {
    let n = h.nrows();
    let mut big = vec![vec![0.0; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            let z = 0.5 * (h[(i, j)] + h[(j, i)].conj());
            big[i][j] = z.re;
            big[i + n][j + n] = z.re;
            big[i][j + n] = -z.im;
            big[i + n][j] = z.im;
        }
    }
    symmetric_jacobi_eigenvalues(big)
        .into_iter()
        .step_by(2)
        .collect()
}

/// Singular values (descending) via eigenvalues of `M* M`.
pub fn singular_values(m: &DMatrix<Complex64>) -> Vec<f64> {
    // Gram matrix on the smaller side: the other one carries exact zeros that
    // the square root would inflate to ~1e-8.
    let gram = if m.nrows() < m.ncols() { m * m.adjoint() } else { m.adjoint() * m };
    hermitian_eigenvalues(&gram)
        .into_iter()
        .map(|x| x.max(0.0).sqrt())
        .collect()
}

/// `‖M‖₁` for Hermitian `M`, as the absolute eigenvalue sum.
pub fn hermitian_trace_norm(m: &DMatrix<Complex64>) -> f64 {
    hermitian_eigenvalues(m).iter().map(|x| x.abs()).sum()
}

/// Direct index-sum partial transpose on the second factor.
pub fn partial_transpose_second(m: &DMatrix<Complex64>, da: usize, db: usize) -> DMatrix<Complex64> {
    let mut out = DMatrix::zeros(da * db, da * db);
    for i in 0..da {
        for j in 0..da {
            for k in 0..db {
                for l in 0..db {
                    out[(i * db + k, j * db + l)] = m[(i * db + l, j * db + k)];
                }
            }
        }
    }
    out
}

/// Minimum eigenvalue of the partial transpose, computed end to end with the
/// routines above.
pub fn min_pt_eigenvalue(m: &DMatrix<Complex64>, da: usize, db: usize) -> f64 {
    *hermitian_eigenvalues(&partial_transpose_second(m, da, db))
        .last()
        .unwrap()
}
