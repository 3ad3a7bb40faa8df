use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Largest degree [`hermite`] accepts.
pub const MAX_DEGREE: usize = 200;

/// Physicist's Hermite polynomial `H_j(x)` by three-term recurrence.
pub fn hermite(j: usize, x: f64) -> Result<f64> {
    if j > MAX_DEGREE {
        return Err(Error::DegreeTooLarge(j));
    }
    Ok(hermite_unchecked(j, x))
}

pub(crate) fn hermite_unchecked(j: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..j {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `f_0(x), …, f_{count-1}(x)` for the unscaled oscillator basis
/// `f_k(x) = e^{-x²/2} H_k(x) / (π^{1/4} √(2^k k!))`.
///
/// Runs the normalized recurrence, so it neither overflows nor loses the
/// Gaussian tail for large `k`.
pub fn basis_values(count: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    let (mut prev, mut cur) = (0.0, PI.powf(-0.25) * (-0.5 * x * x).exp());
    out.push(cur);
    for k in 0..count - 1 {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        out.push(cur);
    }
    out
}

/// Single basis function `f_k(x)`.
pub fn basis_f(k: usize, x: f64) -> f64 {
    basis_values(k + 1, x)[k]
}

/// `φ_0(x), …` of the frequency-`ω̃` basis, `φ_j(x) = ω̃^{1/4} f_j(√ω̃ x)`.
pub fn scaled_values(count: usize, omega: f64, x: f64) -> Vec<f64> {
    let scale = omega.powf(0.25);
    let mut v = basis_values(count, omega.sqrt() * x);
    v.iter_mut().for_each(|f| *f *= scale);
    v
}

pub fn scaled_basis(j: usize, omega: f64, x: f64) -> f64 {
    scaled_values(j + 1, omega, x)[j]
}
