//! Special functions used by the closed-form wavefunctions.
//!
//! Everything here is evaluated by recurrence or by a finite series in `f64`.
//! Only the terminating branch of the confluent hypergeometric function is
//! provided, since every bound state of the oscillator families has a
//! non-positive integer first argument.

use crate::error::{Error, Result};

/// Physicists' Hermite polynomial `H_n(x)`.
pub fn hermite(n: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * x;
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Terminating Kummer function `1F1(-n; b; x)`.
///
/// Summed as `sum_{k=0}^{n} (-n)_k x^k / ((b)_k k!)`, each term obtained from
/// the previous one by the ratio `(k - n) x / ((b + k) (k + 1))`.
pub fn kummer_terminating(n: usize, b: f64, x: f64) -> Result<f64> {
    if !(b > 0.0) {
        return Err(Error::Domain(format!(
            "1F1(-n; b; x) requires b > 0, got b = {b}"
        )));
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..n {
        let kf = k as f64;
        term *= (kf - n as f64) * x / ((b + kf) * (kf + 1.0));
        sum += term;
    }
    Ok(sum)
}

/// Generalized Laguerre polynomial `L_n^alpha(x)`.
pub fn laguerre(n: usize, alpha: f64, x: f64) -> Result<f64> {
    if !(alpha > -1.0) {
        return Err(Error::Domain(format!(
            "L_n^alpha requires alpha > -1, got alpha = {alpha}"
        )));
    }
    let mut prev = 1.0;
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `ln(n!)`, finite for every `n` that fits in memory.
pub fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Rising factorial `(a)_n = a (a + 1) ... (a + n - 1)`.
pub fn pochhammer(a: f64, n: usize) -> f64 {
    (0..n).map(|k| a + k as f64).product()
}

/// Unit-norm prefactor of the oscillator eigenfunction
/// `e^{-s x^2 / 2} H_n(sqrt(s) x)` on the full line, where `s = m omega`.
///
/// Evaluated in log space so `n` well beyond 170 stays finite.
pub fn oscillator_norm(n: usize, s: f64) -> f64 {
    let ln_norm = 0.25 * (s / std::f64::consts::PI).ln()
        - 0.5 * (n as f64 * std::f64::consts::LN_2 + ln_factorial(n));
    ln_norm.exp()
}
