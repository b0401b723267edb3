//! Symmetric tridiagonal eigensolver (implicit-shift QL with eigenvector
//! accumulation).

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Maximum QL sweeps spent on a single eigenvalue.
pub const MAX_ITERATIONS: usize = 50;

/// Eigen-decomposition of a real symmetric tridiagonal matrix.
#[derive(Debug, Clone)]
pub struct TridiagonalEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `q` is the unit eigenvector of `values[q]`.
    pub vectors: DMatrix<f64>,
}

/// Solves `T v = lambda v` for `T` with diagonal `diag` and sub/super-diagonal
/// `offdiag` (`offdiag.len() == diag.len() - 1`).
pub fn symmetric_tridiagonal_eigen(diag: &[f64], offdiag: &[f64]) -> Result<TridiagonalEigen> {
    ql(diag, offdiag, true)
}

/// Eigenvalues only, ascending.
pub fn symmetric_tridiagonal_eigenvalues(diag: &[f64], offdiag: &[f64]) -> Result<Vec<f64>> {
    Ok(ql(diag, offdiag, false)?.values)
}

fn ql(diag: &[f64], offdiag: &[f64], want_vectors: bool) -> Result<TridiagonalEigen> {
    let n = diag.len();
    assert!(n == 0 || offdiag.len() + 1 == n, "offdiag must have length diag.len() - 1");
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n.saturating_sub(1)].copy_from_slice(offdiag);
    let nz = if want_vectors { n } else { 0 };
    let mut z = DMatrix::<f64>::identity(nz, nz);

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_ITERATIONS {
                return Err(Error::NoConvergence { index: l, iterations: MAX_ITERATIONS });
            }

            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..z.nrows() {
                    let zf = z[(k, i + 1)];
                    z[(k, i + 1)] = s * z[(k, i)] + c * zf;
                    z[(k, i)] = c * z[(k, i)] - s * zf;
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = order.iter().map(|&i| d[i]).collect();
    let vectors = DMatrix::from_fn(z.nrows(), z.ncols(), |row, col| z[(row, order[col])]);
    Ok(TridiagonalEigen { values, vectors })
}

/// Flips each column so that its first component above `1e-300` in magnitude is positive.
pub fn fix_column_signs(vectors: &mut DMatrix<f64>) {
    for mut col in vectors.column_iter_mut() {
        if let Some(first) = col.iter().find(|v| v.abs() > 1e-300).copied() {
            if first < 0.0 {
                col.neg_mut();
            }
        }
    }
}
