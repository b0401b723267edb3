//! Parabolic/spherical expansion coefficients.
//!
//! `psi_{n1 n2 m} = sum_j W^j_{n1 n2} psi_{njm}` and the inverse
//! `psi_{njm} = sum_{n1} Wt^{n1}_{nj} psi_{n1 n2 m}`. `W` is real orthogonal,
//! and equals `(-1)^{n1} C^{c gamma}_{a alpha; b beta}`, an SU(2)
//! Clebsch-Gordan coefficient continued to real labels.
//!
//! Matrix layout: `W` has rows `j` and columns `n1`; `Wt` has rows `n1` and
//! columns `j`, so `Wt = W^T`.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::bases::{ParabolicState, SphericalState};
use crate::error::Result;
use crate::numkernel::{f32_unit_terminating_scaled, ln_factorial, ln_gamma};
use crate::qnum::{half, Block, SystemParams};
use crate::verify::quadrature::QuadratureRule;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Label {
    /// spherical `2j`
    J(i32),
    /// parabolic `n1`
    N1(u32),
    /// spheroidal `q`
    Q(usize),
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Label::J(two_j) => write!(f, "j={}", crate::qnum::format_half(*two_j)),
            Label::N1(n1) => write!(f, "n1={n1}"),
            Label::Q(q) => write!(f, "q={q}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionMatrix {
    pub dim: usize,
    pub entries: DMatrix<f64>,
    pub row_labels: Vec<Label>,
    pub col_labels: Vec<Label>,
}

impl ExpansionMatrix {
    pub fn j_labels(block: &Block) -> Vec<Label> {
        (0..block.dim()).map(|k| Label::J(block.two_j(k))).collect()
    }

    pub fn n1_labels(block: &Block) -> Vec<Label> {
        (0..block.dim()).map(|i| Label::N1(i as u32)).collect()
    }

    pub fn q_labels(block: &Block) -> Vec<Label> {
        (0..block.dim()).map(Label::Q).collect()
    }

    /// `max |M^T M - I|`.
    pub fn orthogonality_residual(&self) -> f64 {
        let m = &self.entries;
        (m.transpose() * m - DMatrix::identity(self.dim, self.dim)).abs().max()
    }
}

/// Real-valued Clebsch-Gordan labels `C^{c gamma}_{a alpha; b beta}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CgLabels {
    pub a: f64,
    pub alpha: f64,
    pub b: f64,
    pub beta: f64,
    pub c: f64,
    pub gamma: f64,
}

/// Labels of `W^j_{n1 n2}` for spherical index `k = j - m_plus`.
pub fn cg_labels(block: &Block, k: usize, n1: usize) -> CgLabels {
    let dc = &block.dc;
    let n = block.n();
    let j = half(block.two_j(k));
    let n1f = n1 as f64;
    let n2f = (block.dim() - 1 - n1) as f64;
    let mm = dc.m_minus();
    CgLabels {
        a: 0.5 * (n + mm + dc.delta2 - 1.0),
        alpha: 0.5 * (dc.m2 + n2f - n1f),
        b: 0.5 * (n - mm + dc.delta1 - 1.0),
        beta: 0.5 * (dc.m1 + n1f - n2f),
        c: j + 0.5 * dc.delta(),
        gamma: 0.5 * (dc.m1 + dc.m2),
    }
}

fn lf(x: f64) -> Result<f64> {
    ln_factorial(x)
}

/// `(-1)^k` for a label difference that is an integer up to rounding.
fn parity_sign(x: f64) -> f64 {
    if (x.round() as i64).rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

fn combine(ln_pref: f64, sign: f64, f: crate::numkernel::Scaled) -> f64 {
    if f.mantissa == 0.0 {
        return 0.0;
    }
    sign * f.mantissa * (ln_pref + f.ln_scale).exp()
}

/// Clebsch-Gordan coefficient from the `3F2(-a-b-c-1, -a+alpha, -c+gamma; -a-b+gamma, -b-c+alpha | 1)` form.
pub fn clebsch_gordan(l: &CgLabels) -> Result<f64> {
    let CgLabels { a, alpha, b, beta, c, gamma } = *l;
    let ln_sq = (2.0 * c + 1.0).ln() + lf(a + alpha)? + lf(c + gamma)?
        - lf(a - alpha)?
        - lf(c - gamma)?
        - lf(a + b + c + 1.0)?
        - lf(a + b - c)?
        - lf(a - b + c)?
        - lf(b - a + c)?;
    let ln_pref = 0.5 * ln_sq + lf(a + b - gamma)? + lf(b + c - alpha)?
        - 0.5 * (lf(b - beta)? + lf(b + beta)?);
    let f = f32_unit_terminating_scaled([-a - b - c - 1.0, -a + alpha, -c + gamma], [-a - b + gamma, -b - c + alpha])?;
    Ok(combine(ln_pref, parity_sign(a - alpha), f))
}

/// Clebsch-Gordan coefficient from the `3F2(-a+alpha, c+gamma+1, -c+gamma; gamma-a-b, b-a+gamma+1 | 1)` form.
pub fn clebsch_gordan_alt(l: &CgLabels) -> Result<f64> {
    let CgLabels { a, alpha, b, beta, c, gamma } = *l;
    let ln_sq = (2.0 * c + 1.0).ln() + lf(b - a + c)? + lf(a + alpha)? + lf(b + beta)? + lf(c + gamma)?
        - lf(b - beta)?
        - lf(c - gamma)?
        - lf(a + b - c)?
        - lf(a - b + c)?
        - lf(a + b + c + 1.0)?;
    let ln_pref = 0.5 * ln_sq - 0.5 * lf(a - alpha)? + lf(a + b - gamma)? - lf(b - a + gamma)?;
    let f = f32_unit_terminating_scaled([-a + alpha, c + gamma + 1.0, -c + gamma], [gamma - a - b, b - a + gamma + 1.0])?;
    Ok(combine(ln_pref, parity_sign(a - alpha), f))
}

fn block_and_indices(params: &SystemParams, two_n: i32, two_j: i32, n1: u32, two_m: i32) -> Result<(Block, usize, usize)> {
    let block = Block::new(*params, two_n, two_m)?;
    let k = block.j_index(two_j)?;
    block.check_n1(n1 as usize)?;
    Ok((block, k, n1 as usize))
}

/// `W^j_{n1 n2}` of a block from the explicit `3F2(-n1, -j+m+, j+m++delta+1; m1+1, -n+m++1 | 1)` closed form.
pub fn w_entry(block: &Block, k: usize, n1: usize) -> Result<f64> {
    let dc = &block.dc;
    let n = block.n();
    let j = half(block.two_j(k));
    let (mp, mm) = (dc.m_plus(), dc.m_minus());
    let delta = dc.delta();
    let n1f = n1 as f64;
    let n2f = (block.dim() - 1 - n1) as f64;

    let ln_first = (2.0 * j + delta + 1.0).ln() + ln_gamma(n1f + dc.m1 + 1.0)? + ln_gamma(n2f + dc.m2 + 1.0)?
        - lf(n1f)?
        - lf(n2f)?
        - lf(n - j - 1.0)?
        - lf(j - mp)?
        - ln_gamma(j + mm + dc.delta2 + 1.0)?;
    let ln_last = ln_gamma(j - mm + dc.delta1 + 1.0)? + ln_gamma(j + mp + delta + 1.0)? - ln_gamma(n + j + delta + 1.0)?;
    let ln_pref = 0.5 * ln_first + lf(n - mp - 1.0)? - ln_gamma(dc.m1 + 1.0)? + 0.5 * ln_last;
    let f = f32_unit_terminating_scaled([-n1f, -(j - mp), j + mp + delta + 1.0], [dc.m1 + 1.0, -n + mp + 1.0])?;
    Ok(combine(ln_pref, 1.0, f))
}

pub fn w_coefficient(params: &SystemParams, two_n: i32, two_j: i32, n1: u32, two_m: i32) -> Result<f64> {
    let (block, k, n1) = block_and_indices(params, two_n, two_j, n1, two_m)?;
    w_entry(&block, k, n1)
}

/// `W = (-1)^{n1} C^{c gamma}_{a alpha; b beta}`, with the CG evaluated in either form.
pub fn w_via_cg(params: &SystemParams, two_n: i32, two_j: i32, n1: u32, two_m: i32, alt_form: bool) -> Result<f64> {
    let (block, k, n1) = block_and_indices(params, two_n, two_j, n1, two_m)?;
    let labels = cg_labels(&block, k, n1);
    let cg = if alt_form { clebsch_gordan_alt(&labels)? } else { clebsch_gordan(&labels)? };
    Ok(parity_sign(n1 as f64) * cg)
}

/// `Wt^{n1}_{nj}` from the inverse-expansion CG labels, written as
/// `alpha' = a - n1`, `beta' = n1 + |m-s| - (n - m_minus - delta1 - 1)/2`.
pub fn w_tilde_entry(block: &Block, k: usize, n1: usize) -> Result<f64> {
    let dc = &block.dc;
    let n = block.n();
    let base = cg_labels(block, k, n1);
    let n1f = n1 as f64;
    let labels = CgLabels {
        alpha: base.a - n1f,
        beta: n1f + dc.abs_m_minus_s - 0.5 * (n - dc.m_minus() - dc.delta1 - 1.0),
        ..base
    };
    Ok(parity_sign(n1f) * clebsch_gordan(&labels)?)
}

pub fn w_tilde_coefficient(params: &SystemParams, two_n: i32, two_j: i32, n1: u32, two_m: i32) -> Result<f64> {
    let (block, k, n1) = block_and_indices(params, two_n, two_j, n1, two_m)?;
    w_tilde_entry(&block, k, n1)
}

/// `W` with rows `j` and columns `n1`.
pub fn w_matrix(block: &Block) -> Result<ExpansionMatrix> {
    let d = block.dim();
    let mut entries = DMatrix::zeros(d, d);
    for k in 0..d {
        for n1 in 0..d {
            entries[(k, n1)] = w_entry(block, k, n1)?;
        }
    }
    Ok(ExpansionMatrix {
        dim: d,
        entries,
        row_labels: ExpansionMatrix::j_labels(block),
        col_labels: ExpansionMatrix::n1_labels(block),
    })
}

/// `Wt` with rows `n1` and columns `j`.
pub fn w_tilde_matrix(block: &Block) -> Result<ExpansionMatrix> {
    let d = block.dim();
    let mut entries = DMatrix::zeros(d, d);
    for n1 in 0..d {
        for k in 0..d {
            entries[(n1, k)] = w_tilde_entry(block, k, n1)?;
        }
    }
    Ok(ExpansionMatrix {
        dim: d,
        entries,
        row_labels: ExpansionMatrix::n1_labels(block),
        col_labels: ExpansionMatrix::j_labels(block),
    })
}

/// `int_0^inf R_{nj'}(r) R_{nj}(r) dr` (no `r^2` weight) by generalized
/// Gauss-Laguerre quadrature with `t = 2 eps r`.
pub fn biorthogonality_integral(params: &SystemParams, two_m: i32, two_n: i32, two_j: i32, two_jp: i32) -> Result<f64> {
    let block = Block::new(*params, two_n, two_m)?;
    let s1 = SphericalState::new(params, block.spherical(block.j_index(two_j)?))?;
    let s2 = SphericalState::new(params, block.spherical(block.j_index(two_jp)?))?;
    let alpha = half(two_j) + half(two_jp) + block.dc.delta();
    let order = block.dim() + 16;
    let rule = QuadratureRule::gauss_laguerre(order, alpha);
    Ok(rule.integrate_radial(2.0 * block.epsilon(), |r| s1.radial_r(r) * s2.radial_r(r)))
}

/// `2 delta_{jj'} / ((n + delta/2)^3 (2j + delta + 1))`.
pub fn biorthogonality_closed_form(params: &SystemParams, two_m: i32, two_n: i32, two_j: i32, two_jp: i32) -> Result<f64> {
    let block = Block::new(*params, two_n, two_m)?;
    block.j_index(two_j)?;
    block.j_index(two_jp)?;
    if two_j != two_jp {
        return Ok(0.0);
    }
    let ne = block.n_effective();
    Ok(2.0 / (ne * ne * ne * (2.0 * half(two_j) + block.dc.delta() + 1.0)))
}

/// Brute-force `<psi_{njm} | psi_{n1 n2 m}>` for every `(j, n1)` of a block,
/// rows `j` and columns `n1`.
///
/// The azimuthal integral is `2 pi`. The remaining integrand, written in
/// `(xi, eta)`, is `xi^{m1} eta^{m2} e^{-eps(xi+eta)}` times a polynomial, so a
/// product of Laguerre rules with exponents `m1`, `m2` integrates it exactly.
pub fn overlap_quadrature(block: &Block, order: usize) -> Result<DMatrix<f64>> {
    let params = block.params;
    let d = block.dim();
    let eps = block.epsilon();
    let sph: Vec<SphericalState> = (0..d).map(|k| SphericalState::new(&params, block.spherical(k))).collect::<Result<_>>()?;
    let par: Vec<ParabolicState> = (0..d).map(|i| ParabolicState::new(&params, block.parabolic(i))).collect::<Result<_>>()?;
    let rx = QuadratureRule::gauss_laguerre(order, block.dc.m1);
    let ry = QuadratureRule::gauss_laguerre(order, block.dc.m2);
    // integrate_radial's per-node factor, applied by hand to reuse evaluations
    let factors = |rule: &QuadratureRule| -> Vec<(f64, f64)> {
        rule.nodes
            .iter()
            .zip(&rule.ln_weights)
            .map(|(&t, &lw)| (t / eps, (lw + t - rule.alpha * t.ln()).exp() / eps))
            .collect()
    };
    let fx = factors(&rx);
    let fy = factors(&ry);
    let mut acc = vec![crate::numkernel::KahanSum::new(); d * d];
    let mut s_vals = vec![0.0; d];
    let mut p_vals = vec![0.0; d];
    for &(xi, wx) in &fx {
        for &(eta, wy) in &fy {
            let r = 0.5 * (xi + eta);
            let theta = ((xi - eta) / (xi + eta)).clamp(-1.0, 1.0).acos();
            let w = wx * wy * 0.25 * (xi + eta) * 2.0 * std::f64::consts::PI;
            for k in 0..d {
                s_vals[k] = sph[k].radial_r(r) * sph[k].angular_theta(theta);
                p_vals[k] = par[k].profile(xi, eta);
            }
            for k in 0..d {
                for i in 0..d {
                    acc[k * d + i].add(w * s_vals[k] * p_vals[i]);
                }
            }
        }
    }
    Ok(DMatrix::from_fn(d, d, |k, i| acc[k * d + i].value()))
}
