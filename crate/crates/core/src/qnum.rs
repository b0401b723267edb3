//! Quantum numbers and the constants derived from them.
//!
//! All half-integers are doubled: `two_s = 2s`, `two_m = 2m`, `two_n = 2n`,
//! `two_j = 2j`. For a fixed `m` the perturbations `c1`, `c2` shift the
//! azimuthal exponents by `delta1`, `delta2`, and through them the energy.
//! Energies therefore depend on `(n, m)` and not on `n` alone; each `(n, m)`
//! pair is a degenerate sector of dimension `n - m_plus` (see [`Block`]).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Converts a doubled quantum number to its value.
pub fn half(two_x: i32) -> f64 {
    f64::from(two_x) / 2.0
}

/// Formats a doubled quantum number as `3/2`, `-1/2` or `2`.
pub fn format_half(two_x: i32) -> String {
    if two_x % 2 == 0 {
        format!("{}", two_x / 2)
    } else {
        format!("{two_x}/2")
    }
}

/// Parses `"1/2"`, `"-3/2"`, `"0.5"`, `"2"` into a doubled integer.
pub fn parse_half(text: &str) -> Result<i32> {
    let text = text.trim();
    let bad = || Error::InvalidQuantumNumbers(format!("`{text}` is not an integer or half-integer"));
    let value = if let Some((num, den)) = text.split_once('/') {
        let num: f64 = num.trim().parse().map_err(|_| bad())?;
        let den: f64 = den.trim().parse().map_err(|_| bad())?;
        if den == 0.0 {
            return Err(bad());
        }
        num / den
    } else {
        text.parse::<f64>().map_err(|_| bad())?
    };
    let doubled = 2.0 * value;
    if !doubled.is_finite() || (doubled - doubled.round()).abs() > 1e-9 || doubled.abs() > 1e6 {
        return Err(bad());
    }
    Ok(doubled.round() as i32)
}

/// Monopole number `s` (doubled) and the ring-term strengths `c1`, `c2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub two_s: i32,
    pub c1: f64,
    pub c2: f64,
}

impl SystemParams {
    pub fn new(two_s: i32, c1: f64, c2: f64) -> Result<Self> {
        for (name, c) in [("c1", c1), ("c2", c2)] {
            if !(c >= 0.0) || !c.is_finite() {
                return Err(Error::InvalidParams(format!("{name} = {c} must be finite and nonnegative")));
            }
        }
        Ok(Self { two_s, c1, c2 })
    }

    /// Hydrogen: `s = 0`, `c1 = c2 = 0`.
    pub fn hydrogen() -> Self {
        Self { two_s: 0, c1: 0.0, c2: 0.0 }
    }

    pub fn s(&self) -> f64 {
        half(self.two_s)
    }

    pub fn derive(&self, two_m: i32) -> Result<DerivedConstants> {
        derive_constants(self, two_m)
    }

    /// Every `(n, m)` sector with `n <= n_max`, ordered by `n` then `m`.
    pub fn blocks_up_to(&self, two_n_max: i32) -> Vec<Block> {
        let two_s_abs = self.two_s.abs();
        let mut out = Vec::new();
        // smallest n is |s| + 1, and n - s is an integer
        let mut two_n = two_s_abs + 2;
        while two_n <= two_n_max {
            let mut two_m = -(two_n - 2);
            while two_m <= two_n - 2 {
                if let Ok(block) = Block::new(*self, two_n, two_m) {
                    out.push(block);
                }
                two_m += 2;
            }
            two_n += 2;
        }
        out
    }
}

/// Constants of one `m` sector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedConstants {
    pub two_m: i32,
    /// `|m - s|`
    pub abs_m_minus_s: f64,
    /// `|m + s|`
    pub abs_m_plus_s: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub m1: f64,
    pub m2: f64,
    /// `2 m_plus`, an integer
    pub two_m_plus: i32,
    /// `2 m_minus`, an integer
    pub two_m_minus: i32,
}

impl DerivedConstants {
    pub fn m_plus(&self) -> f64 {
        half(self.two_m_plus)
    }

    pub fn m_minus(&self) -> f64 {
        half(self.two_m_minus)
    }

    /// `delta1 + delta2`
    pub fn delta(&self) -> f64 {
        self.delta1 + self.delta2
    }

    /// Eigenvalue of `M` for angular label `j`: `(j + delta/2)(j + delta/2 + 1)`.
    pub fn m_eigenvalue(&self, two_j: i32) -> f64 {
        let l = half(two_j) + 0.5 * self.delta();
        l * (l + 1.0)
    }
}

/// `sqrt(a^2 + 4c) - a` without cancellation for small `c`.
fn shifted_root(a: f64, c: f64) -> (f64, f64) {
    let root = (a * a + 4.0 * c).sqrt();
    let delta = if a > 0.0 { 4.0 * c / (root + a) } else { root };
    (root, delta)
}

pub fn derive_constants(params: &SystemParams, two_m: i32) -> Result<DerivedConstants> {
    if (two_m - params.two_s).rem_euclid(2) != 0 {
        return Err(Error::Parity { two_m, two_s: params.two_s });
    }
    let two_diff = (two_m - params.two_s).abs();
    let two_sum = (two_m + params.two_s).abs();
    let abs_m_minus_s = half(two_diff);
    let abs_m_plus_s = half(two_sum);
    let (m1, delta1) = shifted_root(abs_m_minus_s, params.c1);
    let (m2, delta2) = shifted_root(abs_m_plus_s, params.c2);
    Ok(DerivedConstants {
        two_m,
        abs_m_minus_s,
        abs_m_plus_s,
        delta1,
        delta2,
        m1,
        m2,
        two_m_plus: (two_sum + two_diff) / 2,
        two_m_minus: (two_sum - two_diff) / 2,
    })
}

/// `epsilon = 1 / n_effective`, with `n_effective = n + (delta1 + delta2)/2`.
pub fn epsilon(n_effective: f64) -> f64 {
    1.0 / n_effective
}

/// Bound-state energy `E = -1 / (2 (n + (delta1+delta2)/2)^2)` of the `(n, m)` sector.
pub fn energy(params: &SystemParams, two_m: i32, two_n: i32) -> Result<f64> {
    let block = Block::new(*params, two_n, two_m)?;
    Ok(block.energy())
}

/// Spherical labels `(n, j, m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SphericalQN {
    pub two_n: i32,
    pub two_j: i32,
    pub two_m: i32,
}

/// Parabolic labels `(n1, n2, m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ParabolicQN {
    pub n1: u32,
    pub n2: u32,
    pub two_m: i32,
}

impl SphericalQN {
    pub fn validate(&self, params: &SystemParams) -> Result<DerivedConstants> {
        let dc = derive_constants(params, self.two_m)?;
        let k = self.two_j - dc.two_m_plus;
        if k < 0 || k % 2 != 0 {
            return Err(Error::InvalidQuantumNumbers(format!(
                "j = {} must be m_plus + k with k = 0, 1, ... (m_plus = {})",
                format_half(self.two_j),
                format_half(dc.two_m_plus)
            )));
        }
        let radial = self.two_n - self.two_j - 2;
        if radial < 0 || radial % 2 != 0 {
            return Err(Error::InvalidQuantumNumbers(format!(
                "n - j - 1 must be a nonnegative integer (n = {}, j = {})",
                format_half(self.two_n),
                format_half(self.two_j)
            )));
        }
        Ok(dc)
    }
}

impl ParabolicQN {
    /// `2n` from `n = n1 + n2 + m_plus + 1`.
    pub fn two_n(&self, dc: &DerivedConstants) -> i32 {
        2 * (self.n1 + self.n2) as i32 + dc.two_m_plus + 2
    }
}

/// One degenerate `(n, m)` sector: `d = n - m_plus` spherical states
/// `j = m_plus, ..., n-1` and `d` parabolic states `n1 = 0, ..., d-1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Block {
    pub params: SystemParams,
    pub two_n: i32,
    pub two_m: i32,
    pub dc: DerivedConstants,
}

impl Block {
    pub fn new(params: SystemParams, two_n: i32, two_m: i32) -> Result<Self> {
        let dc = derive_constants(&params, two_m)?;
        let gap = two_n - dc.two_m_plus - 2;
        if gap < 0 || gap % 2 != 0 {
            return Err(Error::InvalidQuantumNumbers(format!(
                "n - m_plus - 1 must be a nonnegative integer (n = {}, m = {}, m_plus = {})",
                format_half(two_n),
                format_half(two_m),
                format_half(dc.two_m_plus)
            )));
        }
        Ok(Self { params, two_n, two_m, dc })
    }

    pub fn n(&self) -> f64 {
        half(self.two_n)
    }

    /// Block dimension `n - m_plus`.
    pub fn dim(&self) -> usize {
        ((self.two_n - self.dc.two_m_plus) / 2) as usize
    }

    /// `n + (delta1 + delta2)/2`
    pub fn n_effective(&self) -> f64 {
        self.n() + 0.5 * self.dc.delta()
    }

    pub fn epsilon(&self) -> f64 {
        epsilon(self.n_effective())
    }

    pub fn energy(&self) -> f64 {
        let e = self.epsilon();
        -0.5 * e * e
    }

    /// `2j` of the `k`-th spherical state.
    pub fn two_j(&self, k: usize) -> i32 {
        self.dc.two_m_plus + 2 * k as i32
    }

    pub fn spherical(&self, k: usize) -> SphericalQN {
        SphericalQN { two_n: self.two_n, two_j: self.two_j(k), two_m: self.two_m }
    }

    pub fn parabolic(&self, n1: usize) -> ParabolicQN {
        ParabolicQN { n1: n1 as u32, n2: (self.dim() - 1 - n1) as u32, two_m: self.two_m }
    }

    /// Index `k = j - m_plus` of a spherical label in this block.
    pub fn j_index(&self, two_j: i32) -> Result<usize> {
        let k = two_j - self.dc.two_m_plus;
        if k < 0 || k % 2 != 0 || (k / 2) as usize >= self.dim() {
            return Err(Error::InvalidQuantumNumbers(format!(
                "j = {} not in block n = {}, m = {}",
                format_half(two_j),
                format_half(self.two_n),
                format_half(self.two_m)
            )));
        }
        Ok((k / 2) as usize)
    }

    pub fn check_n1(&self, n1: usize) -> Result<()> {
        if n1 >= self.dim() {
            return Err(Error::InvalidQuantumNumbers(format!(
                "n1 = {n1} exceeds n - m_plus - 1 = {}",
                self.dim() - 1
            )));
        }
        Ok(())
    }

    /// `beta` eigenvalue of the parabolic state `n1`.
    pub fn beta(&self, n1: usize) -> f64 {
        let n2 = (self.dim() - 1 - n1) as f64;
        self.epsilon() * (n1 as f64 - n2 + 0.5 * (self.dc.m1 - self.dc.m2))
    }

    /// Spectrum of `M` over the block, ascending in `j`.
    pub fn m_spectrum(&self) -> Vec<f64> {
        (0..self.dim()).map(|k| self.dc.m_eigenvalue(self.two_j(k))).collect()
    }

    /// `beta` list ascending in `n1`.
    pub fn beta_spectrum(&self) -> Vec<f64> {
        (0..self.dim()).map(|n1| self.beta(n1)).collect()
    }

    pub fn label(&self) -> String {
        format!(
            "s={} c1={} c2={} n={} m={}",
            format_half(self.params.two_s),
            self.params.c1,
            self.params.c2,
            format_half(self.two_n),
            format_half(self.two_m)
        )
    }
}

/// Separation constant `beta = epsilon (n1 - n2 + (m1 - m2)/2)`.
pub fn beta_eigenvalue(params: &SystemParams, pq: &ParabolicQN) -> Result<f64> {
    let dc = derive_constants(params, pq.two_m)?;
    let block = Block::new(*params, pq.two_n(&dc), pq.two_m)?;
    Ok(block.beta(pq.n1 as usize))
}

/// Spherical and parabolic labels of the `(n, m)` sector.
pub fn enumerate_basis(
    params: &SystemParams,
    two_m: i32,
    two_n: i32,
) -> Result<(Vec<SphericalQN>, Vec<ParabolicQN>)> {
    let block = Block::new(*params, two_n, two_m)?;
    let d = block.dim();
    Ok(((0..d).map(|k| block.spherical(k)).collect(), (0..d).map(|i| block.parabolic(i)).collect()))
}
