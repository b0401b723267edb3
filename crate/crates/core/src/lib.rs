//! Bound-state spectral analysis of the generalized MIC-Kepler system.
//!
//! The system is a charged particle in the field of a Dirac dyon with two
//! additional ring-shaped terms `c1/(r(r+z)) + c2/(r(r-z))`. Its Schrödinger
//! equation separates in spherical, parabolic and prolate spheroidal
//! coordinates. This crate provides:
//!
//! - [`numkernel`]: log-gamma, Pochhammer symbols, Jacobi polynomials and the
//!   terminating hypergeometric sums used by every closed form;
//! - [`qnum`]: quantum-number bookkeeping and derived constants;
//! - [`coords`]: the four coordinate systems and conversions;
//! - [`bases`]: normalized spherical and parabolic wavefunctions;
//! - [`interbasis`]: the parabolic/spherical expansion coefficients and
//!   their Clebsch-Gordan representation;
//! - [`spheroidal`]: the separation-constant eigenproblem `M + R X` in both
//!   bases;
//! - [`verify`]: quadrature rules and the numeric check harness;
//! - [`cli`]: the `mic-kepler` command-line front end.
//!
//! Half-integer quantum numbers are stored doubled (`two_s`, `two_m`, ...)
//! throughout.

pub mod bases;
pub mod cli;
pub mod coords;
pub mod error;
pub mod interbasis;
pub mod numkernel;
pub mod qnum;
pub mod spheroidal;
pub mod tridiag;
pub mod verify;

pub use error::{Error, Result};
pub use qnum::{Block, DerivedConstants, ParabolicQN, SphericalQN, SystemParams};
