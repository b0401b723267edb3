//! Gauss-Legendre and generalized Gauss-Laguerre rules.
//!
//! Laguerre rules carry the weight `t^alpha e^{-t}` so that radial integrands
//! with non-integer powers `t^{j + delta/2}` are integrated exactly when
//! `alpha` is matched to the power.

use serde::Serialize;

use crate::numkernel::{ln_factorial, ln_gamma, KahanSum};
use crate::tridiag::symmetric_tridiagonal_eigenvalues;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RuleKind {
    GaussLegendre,
    GaussLaguerre,
}

#[derive(Debug, Clone, Serialize)]
pub struct QuadratureRule {
    pub kind: RuleKind,
    pub order: usize,
    /// Laguerre weight exponent; zero for Legendre.
    pub alpha: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// `ln` of each weight, kept because Laguerre weights underflow at high order.
    pub ln_weights: Vec<f64>,
}

/// `(P_n(x), P_n'(x))` for Legendre polynomials.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// `L_n^alpha(x)` and `L_{n-1}^alpha(x)` scaled by `exp(-ln_scale)`.
fn laguerre_pair(n: usize, alpha: f64, x: f64) -> (f64, f64, f64) {
    let mut prev = 1.0;
    let mut cur = 1.0 + alpha - x;
    let mut ln_scale = 0.0;
    if n == 0 {
        return (1.0, 0.0, 0.0);
    }
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
        if cur.abs() > 1e150 {
            prev *= 1e-150;
            cur *= 1e-150;
            ln_scale += 150.0 * std::f64::consts::LN_10;
        }
    }
    (cur, prev, ln_scale)
}

impl QuadratureRule {
    /// Gauss-Legendre rule on `[-1, 1]`.
    pub fn gauss_legendre(order: usize) -> Self {
        assert!(order >= 1, "quadrature order must be positive");
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre_with_derivative(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(n, x);
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        let ln_weights = weights.iter().map(|w: &f64| w.ln()).collect();
        Self { kind: RuleKind::GaussLegendre, order, alpha: 0.0, nodes, weights, ln_weights }
    }

    /// Generalized Gauss-Laguerre rule for `int_0^inf t^alpha e^{-t} f(t) dt`.
    ///
    /// Nodes seed from the Golub-Welsch Jacobi matrix and are Newton-polished;
    /// weights come from `Gamma(n+alpha+1) / (n! x L_n'(x)^2)` in log form.
    pub fn gauss_laguerre(order: usize, alpha: f64) -> Self {
        assert!(order >= 1, "quadrature order must be positive");
        assert!(alpha > -1.0, "Laguerre exponent must exceed -1");
        let n = order;
        let diag: Vec<f64> = (0..n).map(|k| 2.0 * k as f64 + alpha + 1.0).collect();
        let off: Vec<f64> = (1..n).map(|k| (k as f64 * (k as f64 + alpha)).sqrt()).collect();
        let mut nodes = symmetric_tridiagonal_eigenvalues(&diag, &off).expect("Laguerre Jacobi matrix is well conditioned");
        let nf = n as f64;
        let ln_const = ln_gamma(nf + alpha + 1.0).expect("positive") - ln_factorial(nf).expect("nonnegative");
        let mut ln_weights = vec![0.0; n];
        for (x, lw) in nodes.iter_mut().zip(ln_weights.iter_mut()) {
            for _ in 0..8 {
                let (l, lm1, _) = laguerre_pair(n, alpha, *x);
                let dl = (nf * l - (nf + alpha) * lm1) / *x;
                let dx = l / dl;
                *x -= dx;
                if dx.abs() <= 1e-15 * x.abs() {
                    break;
                }
            }
            let (l, lm1, ln_scale) = laguerre_pair(n, alpha, *x);
            let dl = (nf * l - (nf + alpha) * lm1) / *x;
            *lw = ln_const - x.ln() - 2.0 * (dl.abs().ln() + ln_scale);
        }
        let weights = ln_weights.iter().map(|l| l.exp()).collect();
        Self { kind: RuleKind::GaussLaguerre, order, alpha, nodes, weights, ln_weights }
    }

    /// `int_a^b f(x) dx` with a Legendre rule mapped onto `[a, b]`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        debug_assert_eq!(self.kind, RuleKind::GaussLegendre);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let sum: KahanSum = self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(mid + half * x)).collect();
        half * sum.value()
    }

    /// `int_0^inf t^alpha e^{-t} g(t) dt = sum w_i g(t_i)` for a Laguerre rule.
    pub fn sum_weighted<F: Fn(f64) -> f64>(&self, g: F) -> f64 {
        let sum: KahanSum = self.nodes.iter().zip(&self.weights).map(|(x, w)| w * g(*x)).collect();
        sum.value()
    }

    /// `int_0^inf f(r) dr` with `t = scale * r`, for integrands that behave like
    /// `t^alpha e^{-t}` times a polynomial.
    pub fn integrate_radial<F: Fn(f64) -> f64>(&self, scale: f64, f: F) -> f64 {
        debug_assert_eq!(self.kind, RuleKind::GaussLaguerre);
        let alpha = self.alpha;
        let sum: KahanSum = self
            .nodes
            .iter()
            .zip(&self.ln_weights)
            .map(|(&t, &lw)| (lw + t - alpha * t.ln()).exp() * f(t / scale))
            .collect();
        sum.value() / scale
    }
}

/// `int_0^inf f(r) dr` after the substitution `t = 2 epsilon r`, using a plain
/// Laguerre rule of order `rule_order`.
pub fn integrate_radial<F: Fn(f64) -> f64>(f: F, epsilon_scale: f64, rule_order: usize) -> f64 {
    QuadratureRule::gauss_laguerre(rule_order, 0.0).integrate_radial(2.0 * epsilon_scale, f)
}
