//! `I_{i,j} = ∫ e^{-(1+ω̃)x²/2} H_i(x) H_j(√ω̃ x) dx` in closed form, and the
//! normalization constants `C_{i,j}` that turn it into a basis overlap.

use std::f64::consts::{LN_2, PI};

use statrs::function::factorial::ln_factorial;

fn ln_fact(n: usize) -> f64 {
    ln_factorial(n as u64)
}

fn ln_coeff_c(i: usize, j: usize, omega: f64) -> f64 {
    0.5 * (0.5 * omega.ln() - PI.ln() - (i + j) as f64 * LN_2 - ln_fact(i) - ln_fact(j))
}

/// `C_{i,j} = √(√ω̃ / (π 2^i 2^j i! j!))`, evaluated in log space.
pub fn coeff_c(i: usize, j: usize, omega: f64) -> f64 {
    ln_coeff_c(i, j, omega).exp()
}

/// Signed log-magnitudes of the terms of `I_{i,j}`.
///
/// Expanding the generating functions leaves one free index `r` with
/// `i = 2q + r`, `j = 2p + r`:
/// `I = √(2π/(1+ω̃)) i! j! Σ_r (−1)^p (1−ω̃)^{p+q} (4√ω̃)^r / (p! q! r! (1+ω̃)^{p+q+r})`.
fn terms(i: usize, j: usize, omega: f64) -> Vec<(f64, f64)> {
    if (i + j) % 2 == 1 {
        return Vec::new();
    }
    let base = 0.5 * (2.0 * PI / (1.0 + omega)).ln() + ln_fact(i) + ln_fact(j);
    let ln_one_minus = (1.0 - omega).abs().ln();
    let ln_one_plus = (1.0 + omega).ln();
    let ln_four_root = (4.0 * omega.sqrt()).ln();
    (i % 2..=i.min(j))
        .step_by(2)
        .filter_map(|r| {
            let (q, p) = ((i - r) / 2, (j - r) / 2);
            if p + q > 0 && omega == 1.0 {
                return None;
            }
            let odd = (p % 2 == 1) ^ (omega > 1.0 && (p + q) % 2 == 1);
            let sign = if odd { -1.0 } else { 1.0 };
            let mut log = base + r as f64 * ln_four_root
                - ln_fact(p)
                - ln_fact(q)
                - ln_fact(r)
                - (p + q + r) as f64 * ln_one_plus;
            if p + q > 0 {
                log += (p + q) as f64 * ln_one_minus;
            }
            Some((sign, log))
        })
        .collect()
}

fn sum_scaled(terms: &[(f64, f64)], offset: f64) -> f64 {
    let Some(top) = terms.iter().map(|t| t.1).reduce(f64::max) else {
        return 0.0;
    };
    let s: f64 = terms.iter().map(|(sign, l)| sign * (l - top).exp()).sum();
    s * (top + offset).exp()
}

/// Closed form of `I_{i,j}`; exactly zero when `i` and `j` differ in parity.
pub fn integral_i_closed(i: usize, j: usize, omega: f64) -> f64 {
    sum_scaled(&terms(i, j, omega), 0.0)
}

/// `C_{i,j} I_{i,j} = ⟨f_i | φ_j⟩`, the overlap of the unscaled basis function
/// `f_i` with the frequency-`ω̃` one `φ_j`. Stays finite where `I` alone would
/// overflow. The alternating sum is accurate to ~1e-13 while one index stays
/// small (as in the chain tables); with both indices past ~50 it cancels badly.
pub fn overlap(i: usize, j: usize, omega: f64) -> f64 {
    sum_scaled(&terms(i, j, omega), ln_coeff_c(i, j, omega))
}
