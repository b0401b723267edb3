//! Normalized spherical and parabolic bound-state wavefunctions.
//!
//! Both bases share the azimuthal factor `e^{i(m-s)phi}`. The real profiles
//! (`radial_r * angular_theta` and [`ParabolicState::profile`]) carry
//! everything else, so `psi = profile * e^{i(m-s)phi}` in both cases.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::coords::{ParabolicPoint, SphericalPoint};
use crate::error::Result;
use crate::numkernel::{jacobi_p, kummer_terminating, ln_factorial, ln_gamma};
use crate::qnum::{half, Block, DerivedConstants, ParabolicQN, SphericalQN, SystemParams};

fn azimuthal(dc: &DerivedConstants, two_s: i32, phi: f64) -> Complex64 {
    // m - s is an integer because 2m and 2s share parity
    let k = f64::from((dc.two_m - two_s) / 2);
    Complex64::from_polar(1.0, k * phi)
}

/// `psi_{njm} = R_{nj}(r) Z_{jm}(theta, phi)`.
#[derive(Debug, Clone, Copy)]
pub struct SphericalState {
    pub qn: SphericalQN,
    pub params: SystemParams,
    pub dc: DerivedConstants,
    pub epsilon: f64,
    /// `N_{jm}`
    pub norm_angular: f64,
    /// `C_{nj}`
    pub norm_radial: f64,
    ln_norm_radial: f64,
}

impl SphericalState {
    pub fn new(params: &SystemParams, qn: SphericalQN) -> Result<Self> {
        let dc = qn.validate(params)?;
        let block = Block::new(*params, qn.two_n, qn.two_m)?;
        let epsilon = block.epsilon();
        let j = half(qn.two_j);
        let n = half(qn.two_n);
        let delta = dc.delta();
        let (mp, mm) = (dc.m_plus(), dc.m_minus());

        let ln_n2 = (2.0 * j + delta + 1.0).ln() + ln_factorial(j - mp)? + ln_gamma(j + mp + delta + 1.0)?
            - (4.0 * PI).ln()
            - ln_gamma(j - mm + dc.delta1 + 1.0)?
            - ln_gamma(j + mm + dc.delta2 + 1.0)?;
        let ln_c = (2.0 * epsilon * epsilon).ln() - ln_gamma(2.0 * j + delta + 2.0)?
            + 0.5 * (ln_gamma(n + j + delta + 1.0)? - ln_factorial(n - j - 1.0)?);

        Ok(Self {
            qn,
            params: *params,
            dc,
            epsilon,
            norm_angular: (0.5 * ln_n2).exp(),
            norm_radial: ln_c.exp(),
            ln_norm_radial: ln_c,
        })
    }

    /// Real angular profile `N (cos theta/2)^{m1} (sin theta/2)^{m2} P_{j-m+}^{(m2,m1)}(cos theta)`.
    pub fn angular_theta(&self, theta: f64) -> f64 {
        let (sh, ch) = (0.5 * theta).sin_cos();
        let k = ((self.qn.two_j - self.dc.two_m_plus) / 2) as usize;
        self.norm_angular
            * ch.abs().powf(self.dc.m1)
            * sh.abs().powf(self.dc.m2)
            * jacobi_p(k, self.dc.m2, self.dc.m1, theta.cos())
    }

    pub fn angular_z(&self, theta: f64, phi: f64) -> Complex64 {
        azimuthal(&self.dc, self.params.two_s, phi) * self.angular_theta(theta)
    }

    /// `C (2 eps r)^{j + delta/2} e^{-eps r} F(-n+j+1; 2j+delta+2; 2 eps r)`.
    pub fn radial_r(&self, r: f64) -> f64 {
        let j = half(self.qn.two_j);
        let power = j + 0.5 * self.dc.delta();
        let k = ((self.qn.two_n - self.qn.two_j - 2) / 2) as usize;
        let x = 2.0 * self.epsilon * r;
        let poly = kummer_terminating(k, 2.0 * j + self.dc.delta() + 2.0, x);
        if r == 0.0 {
            return if power == 0.0 { self.norm_radial } else { 0.0 };
        }
        (self.ln_norm_radial + power * x.ln() - self.epsilon * r).exp() * poly
    }

    pub fn psi(&self, p: SphericalPoint) -> Complex64 {
        self.angular_z(p.theta, p.phi) * self.radial_r(p.r)
    }
}

/// `psi_{n1 n2 m} = sqrt2 eps^2 Phi_{n1 m1}(xi) Phi_{n2 m2}(eta) e^{i(m-s)phi} / sqrt(2 pi)`.
#[derive(Debug, Clone, Copy)]
pub struct ParabolicState {
    pub qn: ParabolicQN,
    pub params: SystemParams,
    pub dc: DerivedConstants,
    pub epsilon: f64,
    /// `[Gamma(n_i + m_i + 1)/n_i!]^{1/2} / Gamma(m_i + 1)` for `i = 1, 2`.
    pub norms: (f64, f64),
    ln_norms: (f64, f64),
}

fn ln_phi_norm(n: u32, m: f64) -> Result<f64> {
    let n = f64::from(n);
    Ok(0.5 * (ln_gamma(n + m + 1.0)? - ln_factorial(n)?) - ln_gamma(m + 1.0)?)
}

impl ParabolicState {
    pub fn new(params: &SystemParams, qn: ParabolicQN) -> Result<Self> {
        let dc = params.derive(qn.two_m)?;
        let block = Block::new(*params, qn.two_n(&dc), qn.two_m)?;
        let ln_norms = (ln_phi_norm(qn.n1, dc.m1)?, ln_phi_norm(qn.n2, dc.m2)?);
        Ok(Self {
            qn,
            params: *params,
            dc,
            epsilon: block.epsilon(),
            norms: (ln_norms.0.exp(), ln_norms.1.exp()),
            ln_norms,
        })
    }

    /// `Phi_{n_i m_i}(x)` for `i = 1` (argument xi) or `i = 2` (argument eta).
    pub fn phi_factor(&self, which: u8, x: f64) -> f64 {
        let (n, m, ln_norm) = match which {
            1 => (self.qn.n1, self.dc.m1, self.ln_norms.0),
            _ => (self.qn.n2, self.dc.m2, self.ln_norms.1),
        };
        let ex = self.epsilon * x;
        let poly = kummer_terminating(n as usize, m + 1.0, ex);
        if x == 0.0 {
            return if m == 0.0 { ln_norm.exp() * poly } else { 0.0 };
        }
        (ln_norm + 0.5 * m * ex.ln() - 0.5 * ex).exp() * poly
    }

    /// Real profile with `psi = profile * e^{i(m-s)phi}`.
    pub fn profile(&self, xi: f64, eta: f64) -> f64 {
        let pref = std::f64::consts::SQRT_2 * self.epsilon * self.epsilon / (2.0 * PI).sqrt();
        pref * self.phi_factor(1, xi) * self.phi_factor(2, eta)
    }

    pub fn psi(&self, p: ParabolicPoint) -> Complex64 {
        azimuthal(&self.dc, self.params.two_s, p.phi) * self.profile(p.xi, p.eta)
    }
}

pub fn psi_spherical(state: &SphericalState, p: SphericalPoint) -> Complex64 {
    state.psi(p)
}

pub fn psi_parabolic(state: &ParabolicState, p: ParabolicPoint) -> Complex64 {
    state.psi(p)
}
