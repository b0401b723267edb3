//! Prolate spheroidal basis: eigenvectors of `Lambda = M + R X` inside one
//! `(n, m)` block.
//!
//! `psi_{nqm} = sum_j U^j_q psi_{njm} = sum_{n1} V^{n1}_q psi_{n1 n2 m}`. In the
//! spherical basis `M` is diagonal and `X` tridiagonal; in the parabolic
//! basis `X` is diagonal (the `beta` values) and `M` tridiagonal.
//!
//! The parabolic-side `M` is built from the Clebsch-Gordan recursion with the
//! labels of [`crate::interbasis::cg_labels`]:
//! `M_{n1 n1} = a(a+1) + b(b+1) + 2 alpha beta` and
//! `M_{n1, n1+1} = -sqrt((n1+1) n2 (n1+m1+1)(n2+m2))`.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interbasis::{cg_labels, w_matrix, ExpansionMatrix};
use crate::qnum::{half, Block};
use crate::tridiag::{fix_column_signs, symmetric_tridiagonal_eigen};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BasisTag {
    Spherical,
    Parabolic,
}

/// Symmetric tridiagonal matrix stored as its diagonal and one off-diagonal.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TridiagonalSystem {
    pub dim: usize,
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
    pub basis_tag: BasisTag,
}

impl TridiagonalSystem {
    pub fn to_dense(&self) -> DMatrix<f64> {
        let d = self.dim;
        let mut m = DMatrix::from_diagonal(&DVector::from_column_slice(&self.diag));
        for (i, &e) in self.offdiag.iter().enumerate() {
            m[(i, i + 1)] = e;
            m[(i + 1, i)] = e;
        }
        debug_assert_eq!(m.nrows(), d);
        m
    }
}

/// `A^j_{nm}`, the coupling between `j - 1` and `j`. Defined for
/// `m_plus <= j <= n` and zero at both ends.
pub fn coupling_a(block: &Block, two_j: i32) -> Result<f64> {
    let dc = &block.dc;
    let k = two_j - dc.two_m_plus;
    if k < 0 || k % 2 != 0 || two_j > block.two_n {
        return Err(Error::Domain {
            function: "coupling_a",
            value: half(two_j),
            reason: "j must satisfy m_plus <= j <= n in integer steps",
        });
    }
    if k == 0 || two_j == block.two_n {
        return Ok(0.0);
    }
    let j = half(two_j);
    let n = block.n();
    let (mp, mm, delta) = (dc.m_plus(), dc.m_minus(), dc.delta());
    let num = (j - mp) * (j + mp + delta) * (j - mm + dc.delta1) * (j + mm + dc.delta2) * (n - j) * (n + j + delta);
    let l = j + 0.5 * delta;
    let den = l * l * (2.0 * j + delta - 1.0) * (2.0 * j + delta + 1.0);
    Ok((num / den).sqrt())
}

/// Tridiagonal `X` in the spherical basis (rows and columns `j`).
pub fn x_tridiagonal(block: &Block) -> Result<(Vec<f64>, Vec<f64>)> {
    let dc = &block.dc;
    let d = block.dim();
    let delta = dc.delta();
    let diag = (0..d)
        .map(|k| {
            let j = half(block.two_j(k));
            let den = (2.0 * j + delta) * (2.0 * j + delta + 2.0);
            // den = 0 only for j = 0 with m1 = m2 = 0
            if den == 0.0 {
                0.0
            } else {
                (dc.m1 + dc.m2) * (dc.m1 - dc.m2) / den
            }
        })
        .collect();
    let pref = -2.0 / (2.0 * block.n() + delta);
    let off = (0..d.saturating_sub(1))
        .map(|k| Ok(pref * coupling_a(block, block.two_j(k + 1))?))
        .collect::<Result<_>>()?;
    Ok((diag, off))
}

pub fn x_matrix_spherical(block: &Block) -> Result<DMatrix<f64>> {
    let (diag, offdiag) = x_tridiagonal(block)?;
    Ok(TridiagonalSystem { dim: block.dim(), diag, offdiag, basis_tag: BasisTag::Spherical }.to_dense())
}

/// Tridiagonal `M` in the parabolic basis (rows and columns `n1`).
pub fn m_tridiagonal(block: &Block) -> (Vec<f64>, Vec<f64>) {
    let dc = &block.dc;
    let d = block.dim();
    let diag = (0..d)
        .map(|n1| {
            let l = cg_labels(block, 0, n1);
            l.a * (l.a + 1.0) + l.b * (l.b + 1.0) + 2.0 * l.alpha * l.beta
        })
        .collect();
    let off = (0..d.saturating_sub(1))
        .map(|n1| {
            let n1f = n1 as f64;
            let n2f = (d - 1 - n1) as f64;
            -((n1f + 1.0) * n2f * (n1f + dc.m1 + 1.0) * (n2f + dc.m2)).sqrt()
        })
        .collect();
    (diag, off)
}

pub fn m_matrix_parabolic(block: &Block) -> DMatrix<f64> {
    let (diag, offdiag) = m_tridiagonal(block);
    TridiagonalSystem { dim: block.dim(), diag, offdiag, basis_tag: BasisTag::Parabolic }.to_dense()
}

/// `M + R X` with `M` diagonal.
pub fn spherical_system(block: &Block, r: f64) -> Result<TridiagonalSystem> {
    let (xd, xo) = x_tridiagonal(block)?;
    let diag = block.m_spectrum().iter().zip(&xd).map(|(m, x)| m + r * x).collect();
    let offdiag = xo.iter().map(|x| r * x).collect();
    Ok(TridiagonalSystem { dim: block.dim(), diag, offdiag, basis_tag: BasisTag::Spherical })
}

/// `M + R X` with `X` diagonal.
pub fn parabolic_system(block: &Block, r: f64) -> TridiagonalSystem {
    let (md, offdiag) = m_tridiagonal(block);
    let diag = md.iter().zip(block.beta_spectrum()).map(|(m, b)| m + r * b).collect();
    TridiagonalSystem { dim: block.dim(), diag, offdiag, basis_tag: BasisTag::Parabolic }
}

#[derive(Debug, Clone)]
pub struct SpheroidalSolution {
    pub r: f64,
    /// `lambda_q` ascending, from the spherical-side system.
    pub lambda: Vec<f64>,
    /// The same spectrum from the parabolic-side system.
    pub lambda_parabolic: Vec<f64>,
    /// Rows `j`, columns `q`.
    pub u: ExpansionMatrix,
    /// Rows `n1`, columns `q`.
    pub v: ExpansionMatrix,
}

impl SpheroidalSolution {
    pub fn spectrum_mismatch(&self) -> f64 {
        self.lambda.iter().zip(&self.lambda_parabolic).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

/// Largest entry deviation between `a` and `b` with each column of `b`
/// allowed a sign flip.
pub fn max_deviation_up_to_sign(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.column_iter()
        .zip(b.column_iter())
        .map(|(ca, cb)| {
            let minus = (ca - cb).abs().max();
            let plus = (ca + cb).abs().max();
            minus.min(plus)
        })
        .fold(0.0, f64::max)
}

pub fn solve(block: &Block, r: f64) -> Result<SpheroidalSolution> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::InvalidParams(format!("R = {r} must be finite and nonnegative")));
    }
    let sph = spherical_system(block, r)?;
    let par = parabolic_system(block, r);
    let mut es = symmetric_tridiagonal_eigen(&sph.diag, &sph.offdiag)?;
    let mut ep = symmetric_tridiagonal_eigen(&par.diag, &par.offdiag)?;
    fix_column_signs(&mut es.vectors);
    fix_column_signs(&mut ep.vectors);
    Ok(SpheroidalSolution {
        r,
        lambda: es.values,
        lambda_parabolic: ep.values,
        u: ExpansionMatrix {
            dim: block.dim(),
            entries: es.vectors,
            row_labels: ExpansionMatrix::j_labels(block),
            col_labels: ExpansionMatrix::q_labels(block),
        },
        v: ExpansionMatrix {
            dim: block.dim(),
            entries: ep.vectors,
            row_labels: ExpansionMatrix::n1_labels(block),
            col_labels: ExpansionMatrix::q_labels(block),
        },
    })
}

/// Maximum deviations of the four limit relations, compared up to column sign.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitReport {
    pub r_small: f64,
    pub r_large: f64,
    /// `U(R_small)` vs identity
    pub u_small: f64,
    /// `V(R_small)` vs `Wt`
    pub v_small: f64,
    /// `U(R_large)` vs `W`
    pub u_large: f64,
    /// `V(R_large)` vs identity
    pub v_large: f64,
}

impl LimitReport {
    pub fn max(&self) -> f64 {
        self.u_small.max(self.v_small).max(self.u_large).max(self.v_large)
    }
}

pub fn limits(block: &Block, r_small: f64, r_large: f64) -> Result<LimitReport> {
    let d = block.dim();
    let w = w_matrix(block)?.entries;
    let id = DMatrix::identity(d, d);
    let small = solve(block, r_small)?;
    let large = solve(block, r_large)?;
    Ok(LimitReport {
        r_small,
        r_large,
        u_small: max_deviation_up_to_sign(&small.u.entries, &id),
        v_small: max_deviation_up_to_sign(&small.v.entries, &w.transpose()),
        u_large: max_deviation_up_to_sign(&large.u.entries, &w),
        v_large: max_deviation_up_to_sign(&large.v.entries, &id),
    })
}

fn continue_signs(prev: &DMatrix<f64>, cur: &mut DMatrix<f64>) {
    for q in 0..cur.ncols() {
        if prev.column(q).dot(&cur.column(q)) < 0.0 {
            cur.column_mut(q).neg_mut();
        }
    }
}

/// Solutions along an ascending grid of `R`. Grid points are solved in
/// parallel; eigenvector signs are then continued point to point so each
/// column has maximal overlap with its predecessor.
pub fn sweep(block: &Block, grid: &[f64]) -> Result<Vec<SpheroidalSolution>> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("R grid is empty".into()));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidGrid("R grid must be strictly ascending".into()));
    }
    let mut out: Vec<SpheroidalSolution> = grid.par_iter().map(|&r| solve(block, r)).collect::<Result<_>>()?;
    for i in 1..out.len() {
        let (head, tail) = out.split_at_mut(i);
        let prev = &head[i - 1];
        let cur = &mut tail[0];
        continue_signs(&prev.u.entries, &mut cur.u.entries);
        continue_signs(&prev.v.entries, &mut cur.v.entries);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qnum::SystemParams;
    use crate::tridiag::symmetric_tridiagonal_eigenvalues;
    use approx::assert_relative_eq;

    fn eigvals(m: &DMatrix<f64>) -> Vec<f64> {
        let mut v: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
        v.sort_by(f64::total_cmp);
        v
    }

    #[test]
    fn coupling_examples() {
        let block = Block::new(SystemParams::hydrogen(), 4, 0).unwrap();
        assert_relative_eq!(coupling_a(&block, 2).unwrap(), 1.0, max_relative = 1e-15);
        assert_eq!(coupling_a(&block, 0).unwrap(), 0.0);
        assert_eq!(coupling_a(&block, 4).unwrap(), 0.0);
        assert!(coupling_a(&block, 6).is_err());
        assert!(coupling_a(&block, 1).is_err());
    }

    #[test]
    fn hydrogen_n2_matrices() {
        let block = Block::new(SystemParams::hydrogen(), 4, 0).unwrap();
        let x = x_matrix_spherical(&block).unwrap();
        assert_eq!(x[(0, 0)], 0.0);
        assert_eq!(x[(1, 1)], 0.0);
        assert_relative_eq!(x[(0, 1)], -0.5, max_relative = 1e-15);
        let m = eigvals(&m_matrix_parabolic(&block));
        assert!((m[0] - 0.0).abs() < 1e-14 && (m[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn hydrogen_r3_closed_form() {
        let block = Block::new(SystemParams::hydrogen(), 4, 0).unwrap();
        let sol = solve(&block, 3.0).unwrap();
        let root = 3.25_f64.sqrt();
        assert_relative_eq!(sol.lambda[0], 1.0 - root, max_relative = 1e-14);
        assert_relative_eq!(sol.lambda[1], 1.0 + root, max_relative = 1e-14);
        assert!(sol.spectrum_mismatch() < 1e-13);
    }

    #[test]
    fn operator_spectra() {
        let params = SystemParams::new(1, 0.3, 0.0).unwrap();
        let block = Block::new(params, 7, 1).unwrap();
        let x = eigvals(&x_matrix_spherical(&block).unwrap());
        for (a, b) in x.iter().zip(block.beta_spectrum()) {
            assert!((a - b).abs() < 1e-12);
        }
        let m = eigvals(&m_matrix_parabolic(&block));
        for (a, b) in m.iter().zip(block.m_spectrum()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_r_is_identity() {
        let params = SystemParams::new(2, 0.3, 0.7).unwrap();
        let block = Block::new(params, 10, 0).unwrap();
        let sol = solve(&block, 0.0).unwrap();
        assert_eq!(sol.u.entries, DMatrix::identity(block.dim(), block.dim()));
        for (a, b) in sol.lambda.iter().zip(block.m_spectrum()) {
            assert_relative_eq!(*a, b, max_relative = 1e-15);
        }
    }

    #[test]
    fn basis_change_consistency() {
        let params = SystemParams::new(1, 0.3, 0.7).unwrap();
        let block = Block::new(params, 11, -1).unwrap();
        let w = w_matrix(&block).unwrap().entries;
        for &r in &[0.1, 1.0, 10.0, 100.0] {
            let sol = solve(&block, r).unwrap();
            assert!(sol.spectrum_mismatch() < 1e-10 * (1.0 + r));
            assert!(max_deviation_up_to_sign(&(&w * &sol.v.entries), &sol.u.entries) < 1e-10);
        }
    }

    #[test]
    fn sweep_grid_validation_and_continuity() {
        let block = Block::new(SystemParams::hydrogen(), 6, 0).unwrap();
        assert!(sweep(&block, &[]).is_err());
        assert!(sweep(&block, &[1.0, 0.5]).is_err());
        let grid: Vec<f64> = (0..=100).map(|i| i as f64).collect();
        let sols = sweep(&block, &grid).unwrap();
        for s in &sols {
            assert!(s.lambda.windows(2).all(|w| w[1] - w[0] > 1e-6));
        }
        for pair in sols.windows(2) {
            for q in 0..block.dim() {
                assert!(pair[0].u.entries.column(q).dot(&pair[1].u.entries.column(q)) > 0.0);
            }
        }
        let single = sweep(&block, &[2.5]).unwrap();
        assert_eq!(single[0].u.entries, solve(&block, 2.5).unwrap().u.entries);
    }

    /// Parabolic-side `M` entries as they appear in print: diagonal
    /// `(n1+1)(n2+m_-) + (n-n1+delta2)(n1+|m-s|+delta2) + (delta1-delta2)(delta1-delta2-2)/4 + m_-(m_+ +delta2)`,
    /// upper `-sqrt(n2(n1+1)(n1+|m-s|+delta1+1)(n2+|m-s|+delta2))`,
    /// lower `-sqrt(n1(n2+1)(n1+|m-s|+delta1+1)(n2+|m-s|+delta2+1))`.
    fn printed_m(block: &Block) -> DMatrix<f64> {
        let dc = &block.dc;
        let d = block.dim();
        let n = block.n();
        let ams = dc.abs_m_minus_s;
        let (mp, mm) = (dc.m_plus(), dc.m_minus());
        let (d1, d2) = (dc.delta1, dc.delta2);
        DMatrix::from_fn(d, d, |row, col| {
            let n1 = row as f64;
            let n2 = (d - 1 - row) as f64;
            if row == col {
                (n1 + 1.0) * (n2 + mm) + (n - n1 + d2) * (n1 + ams + d2) + 0.25 * (d1 - d2) * (d1 - d2 - 2.0) + mm * (mp + d2)
            } else if col == row + 1 {
                -(n2 * (n1 + 1.0) * (n1 + ams + d1 + 1.0) * (n2 + ams + d2)).sqrt()
            } else if col + 1 == row {
                -(n1 * (n2 + 1.0) * (n1 + ams + d1 + 1.0) * (n2 + ams + d2 + 1.0)).sqrt()
            } else {
                0.0
            }
        })
    }

    #[test]
    fn printed_m_entries_fail_spectrum_identity() {
        let params = SystemParams::new(1, 0.0, 0.0).unwrap();
        let block = Block::new(params, 7, 1).unwrap();
        let p = printed_m(&block);
        assert!((&p - p.transpose()).abs().max() > 1e-3, "printed form is not symmetric");
        let diag: Vec<f64> = (0..block.dim()).map(|i| p[(i, i)]).collect();
        let off: Vec<f64> = (0..block.dim() - 1).map(|i| p[(i, i + 1)]).collect();
        let vals = symmetric_tridiagonal_eigenvalues(&diag, &off).unwrap();
        let worst = vals.iter().zip(block.m_spectrum()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(worst > 1e-3);
        // the CG-derived matrix equals W^T diag(M) W
        let w = w_matrix(&block).unwrap().entries;
        let conj = w.transpose() * DMatrix::from_diagonal(&DVector::from_vec(block.m_spectrum())) * &w;
        assert!((conj - m_matrix_parabolic(&block)).abs().max() < 1e-12);
    }
}
