//! Cartesian, spherical, parabolic and prolate spheroidal coordinates.
//!
//! Parabolic: `xi = r + z = r(1 + cos theta)`, `eta = r - z = r(1 - cos theta)`.
//!
//! Spheroidal: one focus sits at the origin and the other at `(0, 0, R)`,
//! with `z = (R/2)(mu nu + 1)` and `r = (R/2)(mu + nu)`. This is the
//! Coulomb-center convention, not the midpoint one.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CartesianPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SphericalPoint {
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParabolicPoint {
    pub xi: f64,
    pub eta: f64,
    pub phi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpheroidalPoint {
    pub mu: f64,
    pub nu: f64,
    pub phi: f64,
    /// Interfocus distance.
    pub r_focal: f64,
}

/// Maps an angle into `[0, 2 pi)`.
pub fn normalize_phi(phi: f64) -> f64 {
    let p = phi.rem_euclid(TAU);
    if p >= TAU {
        0.0
    } else {
        p
    }
}

impl CartesianPoint {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    fn azimuth(&self) -> f64 {
        normalize_phi(self.y.atan2(self.x))
    }
}

pub fn spherical_to_cartesian(p: SphericalPoint) -> CartesianPoint {
    let (st, ct) = p.theta.sin_cos();
    let (sp, cp) = p.phi.sin_cos();
    CartesianPoint { x: p.r * st * cp, y: p.r * st * sp, z: p.r * ct }
}

pub fn cartesian_to_spherical(p: CartesianPoint) -> SphericalPoint {
    let r = p.norm();
    let theta = if r == 0.0 { 0.0 } else { (p.z / r).clamp(-1.0, 1.0).acos() };
    SphericalPoint { r, theta, phi: p.azimuth() }
}

pub fn spherical_to_parabolic(p: SphericalPoint) -> ParabolicPoint {
    let ct = p.theta.cos();
    ParabolicPoint { xi: p.r * (1.0 + ct), eta: p.r * (1.0 - ct), phi: p.phi }
}

pub fn parabolic_to_spherical(p: ParabolicPoint) -> SphericalPoint {
    let r = 0.5 * (p.xi + p.eta);
    let theta = if r == 0.0 { 0.0 } else { ((p.xi - p.eta) / (p.xi + p.eta)).clamp(-1.0, 1.0).acos() };
    SphericalPoint { r, theta, phi: p.phi }
}

pub fn parabolic_to_cartesian(p: ParabolicPoint) -> CartesianPoint {
    let rho = (p.xi * p.eta).sqrt();
    let (sp, cp) = p.phi.sin_cos();
    CartesianPoint { x: rho * cp, y: rho * sp, z: 0.5 * (p.xi - p.eta) }
}

pub fn cartesian_to_parabolic(p: CartesianPoint) -> ParabolicPoint {
    let r = p.norm();
    ParabolicPoint { xi: r + p.z, eta: r - p.z, phi: p.azimuth() }
}

pub fn spheroidal_to_cartesian(p: SpheroidalPoint) -> CartesianPoint {
    let half_r = 0.5 * p.r_focal;
    let rho = half_r * ((p.mu * p.mu - 1.0).max(0.0) * (1.0 - p.nu * p.nu).max(0.0)).sqrt();
    let (sp, cp) = p.phi.sin_cos();
    CartesianPoint { x: rho * cp, y: rho * sp, z: half_r * (p.mu * p.nu + 1.0) }
}

/// Inverse spheroidal map for interfocus distance `r_focal`.
///
/// With `r` the distance to the origin and `r1` the distance to `(0, 0, R)`:
/// `mu = (r + r1)/R`, `nu = (r - r1)/R`. As `R -> 0`, `nu -> cos theta`.
pub fn cartesian_to_spheroidal(p: CartesianPoint, r_focal: f64) -> Result<SpheroidalPoint> {
    if !(r_focal > 0.0) {
        return Err(Error::Domain {
            function: "cartesian_to_spheroidal",
            value: r_focal,
            reason: "interfocus distance must be positive",
        });
    }
    let rho2 = p.x * p.x + p.y * p.y;
    if rho2 == 0.0 && p.z > 0.0 && p.z < r_focal {
        return Err(Error::DegenerateGeometry);
    }
    let r = p.norm();
    let dz = p.z - r_focal;
    let r1 = (rho2 + dz * dz).sqrt();
    let mu = ((r + r1) / r_focal).max(1.0);
    let nu = ((r - r1) / r_focal).clamp(-1.0, 1.0);
    Ok(SpheroidalPoint { mu, nu, phi: p.azimuth(), r_focal })
}

/// Volume of the ball `r <= radius` integrated in parabolic coordinates with
/// `dV = (xi + eta)/4 dxi deta dphi` over the triangle `xi + eta <= 2 radius`.
pub fn parabolic_ball_volume(radius: f64, rule: &crate::verify::quadrature::QuadratureRule) -> f64 {
    let top = 2.0 * radius;
    let outer = rule.integrate(0.0, top, |xi| rule.integrate(0.0, top - xi, |eta| 0.25 * (xi + eta)));
    2.0 * PI * outer
}
