//! Independent reference formulas used by the check harness.
//!
//! Nothing here calls into `numkernel`, `interbasis` or `spheroidal`, so a
//! shared bug cannot make an identity pass trivially.

use nalgebra::DMatrix;

fn factorial(k: i32) -> f64 {
    assert!(k >= 0, "factorial of negative integer");
    (1..=k).fold(1.0, |acc, i| acc * f64::from(i))
}

/// SU(2) Clebsch-Gordan coefficient `<j1 m1; j2 m2 | J M>` by Racah's sum,
/// all arguments doubled.
pub fn racah_cg(two_j1: i32, two_m1: i32, two_j2: i32, two_m2: i32, two_j: i32, two_m: i32) -> f64 {
    if two_m1 + two_m2 != two_m
        || two_m1.abs() > two_j1
        || two_m2.abs() > two_j2
        || two_m.abs() > two_j
        || two_j > two_j1 + two_j2
        || two_j < (two_j1 - two_j2).abs()
        || (two_j1 + two_j2 + two_j) % 2 != 0
        || (two_j1 + two_m1) % 2 != 0
        || (two_j2 + two_m2) % 2 != 0
        || (two_j + two_m) % 2 != 0
    {
        return 0.0;
    }
    let h = |x: i32| {
        debug_assert!(x % 2 == 0);
        x / 2
    };
    let pre = f64::from(two_j + 1) * factorial(h(two_j + two_j1 - two_j2)) * factorial(h(two_j - two_j1 + two_j2))
        * factorial(h(two_j1 + two_j2 - two_j))
        / factorial(h(two_j1 + two_j2 + two_j) + 1);
    let pre2 = factorial(h(two_j + two_m))
        * factorial(h(two_j - two_m))
        * factorial(h(two_j1 - two_m1))
        * factorial(h(two_j1 + two_m1))
        * factorial(h(two_j2 - two_m2))
        * factorial(h(two_j2 + two_m2));
    let mut sum = 0.0;
    for k in 0..=h(two_j1 + two_j2 - two_j) {
        let d = [
            h(two_j1 + two_j2 - two_j) - k,
            h(two_j1 - two_m1) - k,
            h(two_j2 + two_m2) - k,
            h(two_j - two_j2 + two_m1) + k,
            h(two_j - two_j1 - two_m2) + k,
        ];
        if d.iter().any(|&x| x < 0) {
            continue;
        }
        let den = factorial(k) * d.iter().map(|&x| factorial(x)).product::<f64>();
        sum += if k % 2 == 0 { 1.0 } else { -1.0 } / den;
    }
    (pre * pre2).sqrt() * sum
}

/// Hydrogen energy `-1/(2n^2)`.
pub fn hydrogen_energy(n: i32) -> f64 {
    -0.5 / f64::from(n * n)
}

/// Hydrogen coupling `A^j = sqrt((j^2 - m^2)(n^2 - j^2) / (4j^2 - 1))`.
pub fn hydrogen_coupling(n: i32, j: i32, m: i32) -> f64 {
    if j == 0 {
        return 0.0;
    }
    let (n, j, m) = (f64::from(n), f64::from(j), f64::from(m));
    ((j * j - m * m) * (n * n - j * j) / (4.0 * j * j - 1.0)).sqrt()
}

/// Hydrogen parabolic-in-spherical coefficient
/// `(-1)^{n1} <(n-1)/2, (m+n2-n1)/2; (n-1)/2, (m+n1-n2)/2 | l, m>` for `m >= 0`
/// with `|m|` in place of `m` otherwise.
pub fn hydrogen_w(n: i32, l: i32, n1: i32, m: i32) -> f64 {
    let am = m.abs();
    let n2 = n - n1 - am - 1;
    let sign = if n1 % 2 == 0 { 1.0 } else { -1.0 };
    sign * racah_cg(n - 1, am + n2 - n1, n - 1, am + n1 - n2, 2 * l, 2 * am)
}

/// Separation constants of hydrogen at `R`, from the dense matrix with
/// diagonal `l(l+1)` and off-diagonal `-(R/n) A^l`.
pub fn hydrogen_lambda(n: i32, m: i32, r: f64) -> Vec<f64> {
    let am = m.abs();
    let d = (n - am) as usize;
    let mat = DMatrix::from_fn(d, d, |i, k| {
        let l = am + i as i32;
        if i == k {
            f64::from(l * (l + 1))
        } else if k == i + 1 {
            -(r / f64::from(n)) * hydrogen_coupling(n, l + 1, am)
        } else if i == k + 1 {
            -(r / f64::from(n)) * hydrogen_coupling(n, l, am)
        } else {
            0.0
        }
    });
    let mut v: Vec<f64> = mat.symmetric_eigen().eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}
