//! Real-valued special functions for the bound-state formulas.
//!
//! Every hypergeometric series that appears for bound states terminates, so
//! only finite sums are implemented. Sums use compensated (Kahan) summation
//! because the `(-n)_p` numerators alternate in sign.

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl std::iter::FromIterator<f64> for KahanSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = KahanSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// `ln Γ(x)` for `x > 0`, Lanczos approximation (g = 7, 9 terms).
///
/// Arguments below 1/2 go through the reflection formula. `Γ(1) = Γ(2) = 1`
/// are returned exactly.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            function: "ln_gamma",
            value: x,
            reason: "requires finite x > 0",
        });
    }
    Ok(ln_gamma_positive(x))
}

fn ln_gamma_positive(x: f64) -> f64 {
    if x == 1.0 || x == 2.0 {
        return 0.0;
    }
    if x < 0.5 {
        // Γ(x)Γ(1-x) = π / sin(πx), with sin(πx) > 0 on (0, 1/2)
        let s = (std::f64::consts::PI * x).sin();
        return std::f64::consts::PI.ln() - s.ln() - ln_gamma_positive(1.0 - x);
    }
    let z = x - 1.0;
    let mut series = LANCZOS_COEF[0];
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        series += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + series.ln()
}

/// `ln k!` through `ln Γ(k + 1)`; accepts real `k > -1`.
pub fn ln_factorial(k: f64) -> Result<f64> {
    ln_gamma(k + 1.0)
}

/// Rising factorial `(a)_k = a (a+1) ... (a+k-1)`, with `(a)_0 = 1`.
pub fn pochhammer(a: f64, k: usize) -> f64 {
    let mut prod = 1.0;
    for i in 0..k {
        let f = a + i as f64;
        if f == 0.0 {
            return 0.0;
        }
        prod *= f;
    }
    prod
}

/// Jacobi polynomial `P_k^{(alpha, beta)}(x)` by the three-term recurrence in degree.
pub fn jacobi_p(k: usize, alpha: f64, beta: f64, x: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let ab = alpha + beta;
    let mut p_prev = 1.0;
    let mut p = 0.5 * (alpha - beta + (ab + 2.0) * x);
    for deg in 2..=k {
        let n = deg as f64;
        let two_n_ab = 2.0 * n + ab;
        let a1 = 2.0 * n * (n + ab) * (two_n_ab - 2.0);
        let a2 = (two_n_ab - 1.0) * (alpha * alpha - beta * beta);
        let a3 = (two_n_ab - 2.0) * (two_n_ab - 1.0) * two_n_ab;
        let a4 = 2.0 * (n + alpha - 1.0) * (n + beta - 1.0) * two_n_ab;
        let next = ((a2 + a3 * x) * p - a4 * p_prev) / a1;
        p_prev = p;
        p = next;
    }
    p
}

/// Terminating confluent hypergeometric function `F(-n; c; x)`.
pub fn kummer_terminating(n: usize, c: f64, x: f64) -> f64 {
    let mut acc = KahanSum::new();
    let mut term = 1.0;
    acc.add(term);
    for p in 0..n {
        let pf = p as f64;
        term *= (pf - n as f64) * x / ((pf + 1.0) * (c + pf));
        acc.add(term);
    }
    acc.value()
}

/// A real number held as `mantissa * exp(ln_scale)`, used where the value
/// would overflow before being combined with other log-space factors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    pub mantissa: f64,
    pub ln_scale: f64,
}

impl Scaled {
    pub fn value(&self) -> f64 {
        if self.mantissa == 0.0 {
            0.0
        } else {
            self.mantissa * self.ln_scale.exp()
        }
    }
}

/// Returns `N` if `a` is a nonpositive integer `-N` (to 1e-12).
fn nonpositive_integer(a: f64) -> Option<usize> {
    let r = a.round();
    if r <= 0.0 && (a - r).abs() <= 1e-12 * (1.0 + a.abs()) {
        Some((-r) as usize)
    } else {
        None
    }
}

/// Terminating `3F2(a1, a2, a3; b1, b2 | 1)` in scaled form.
///
/// The series stops at the smallest `N` for which some numerator parameter
/// equals `-N`. Term magnitudes are accumulated as logarithms with tracked
/// signs and the sum is taken relative to the largest term, so intermediate
/// Pochhammer products never overflow.
pub fn f32_unit_terminating_scaled(a: [f64; 3], b: [f64; 2]) -> Result<Scaled> {
    let n_terms = a
        .iter()
        .filter_map(|&ai| nonpositive_integer(ai))
        .min()
        .ok_or(Error::Domain {
            function: "f32_unit_terminating",
            value: a[0],
            reason: "no numerator parameter is a nonpositive integer",
        })?;

    let mut logs = Vec::with_capacity(n_terms + 1);
    let mut signs = Vec::with_capacity(n_terms + 1);
    let (mut ln_t, mut sign) = (0.0_f64, 1.0_f64);
    logs.push(ln_t);
    signs.push(sign);
    for p in 0..n_terms {
        let pf = p as f64;
        let num = (a[0] + pf) * (a[1] + pf) * (a[2] + pf);
        let den = (b[0] + pf) * (b[1] + pf) * (pf + 1.0);
        if den == 0.0 {
            return Err(Error::Domain {
                function: "f32_unit_terminating",
                value: if b[0] + pf == 0.0 { b[0] } else { b[1] },
                reason: "denominator Pochhammer vanishes before termination",
            });
        }
        if num == 0.0 {
            break;
        }
        let ratio = num / den;
        ln_t += ratio.abs().ln();
        sign *= ratio.signum();
        logs.push(ln_t);
        signs.push(sign);
    }

    let ln_max = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let acc: KahanSum = logs
        .iter()
        .zip(&signs)
        .map(|(&l, &s)| s * (l - ln_max).exp())
        .collect();
    Ok(Scaled {
        mantissa: acc.value(),
        ln_scale: ln_max,
    })
}

/// Terminating `3F2(a1, a2, a3; b1, b2 | 1)`.
pub fn f32_unit_terminating(a1: f64, a2: f64, a3: f64, b1: f64, b2: f64) -> Result<f64> {
    f32_unit_terminating_scaled([a1, a2, a3], [b1, b2]).map(|s| s.value())
}
