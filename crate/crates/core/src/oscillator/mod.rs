//! Analytic MPS of the three-oscillator eigenstate `ψ_{0,0,n}`.
//!
//! In normal-mode coordinates the state is `φ_n(c·x) φ_0 φ_0`, a single
//! Hermite function of frequency `ω̃` along the unit direction `c` (fixed by
//! the mixing angles). Expanding each `φ` in the unscaled basis `{f_k}` gives
//! a bond-dimension-`(n+1)` chain whose elements are the overlaps
//! `C_{i,j} I_{i,j} = ⟨f_i|φ_j⟩`.
//!
//! Site 1 carries `⟨f_k|φ_a⟩`, site 3 carries `√γ_b ⟨f_m|φ_b⟩`, and site 2
//! carries `⟨f_l|φ_{n−a−b}⟩` times the multinomial weight of the `(a, n−a−b, b)`
//! split of `H_n(c·y)`, divided by `√γ_b`. Cut 1 then has Schmidt weights `√α_a`
//! and cut 2 has `√γ_b`.

mod hermite;
mod integral;
mod quadrature;

pub use hermite::{basis_f, basis_values, hermite, scaled_basis, scaled_values, MAX_DEGREE};
pub use integral::{coeff_c, integral_i_closed, overlap};
pub use quadrature::{gauss_hermite, integral_i_quadrature, GaussHermite};

use std::fmt;
use std::str::FromStr;

use statrs::function::factorial::{binomial, ln_factorial};

use crate::error::{Error, Result};
use crate::mps::{CanonicalForm, MatrixProductState, SiteTensor};
use crate::par;
use crate::tensor::C64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams {
    n: usize,
    omega_tilde: f64,
    theta: f64,
    phi: f64,
    varphi: f64,
    phys_cutoff: usize,
}

impl OscillatorParams {
    pub fn new(n: usize, omega_tilde: f64, theta: f64, phi: f64, varphi: f64, phys_cutoff: usize) -> Result<Self> {
        if !(omega_tilde > 0.0 && omega_tilde.is_finite()) {
            return Err(Error::InvalidParams(format!("omega_tilde must be positive, got {omega_tilde}")));
        }
        if ![theta, phi, varphi].iter().all(|a| a.is_finite()) {
            return Err(Error::InvalidParams("angles must be finite".into()));
        }
        if phys_cutoff < n + 1 {
            return Err(Error::InvalidParams(format!(
                "phys_cutoff {phys_cutoff} must be at least n + 1 = {}",
                n + 1
            )));
        }
        if n > MAX_DEGREE {
            return Err(Error::DegreeTooLarge(n));
        }
        Ok(Self {
            n,
            omega_tilde,
            theta,
            phi,
            varphi,
            phys_cutoff,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn omega_tilde(&self) -> f64 {
        self.omega_tilde
    }

    pub fn angles(&self) -> (f64, f64, f64) {
        (self.theta, self.phi, self.varphi)
    }

    pub fn phys_cutoff(&self) -> usize {
        self.phys_cutoff
    }

    /// Unit direction `c` with `H_n(c·y)` the excited normal mode, in oscillator
    /// coordinates. `c₁²` and `c₃²` are the bases of `α` and `γ`.
    pub fn mode_direction(&self) -> [f64; 3] {
        let (t, p, v) = (self.theta, self.phi, self.varphi);
        [
            t.sin() * p.cos(),
            t.cos() * v.sin() - t.sin() * p.sin() * v.cos(),
            t.cos() * v.cos() + t.sin() * p.sin() * v.sin(),
        ]
    }

    fn check_index(&self, a: usize) -> Result<()> {
        if a > self.n {
            return Err(Error::IndexOutOfRange {
                index: a,
                dim: self.n + 1,
            });
        }
        Ok(())
    }

    /// Schmidt weight `α_a` of the 1|23 bipartition.
    pub fn alpha(&self, a: usize) -> Result<f64> {
        self.check_index(a)?;
        let s = (self.theta.sin() * self.phi.cos()).powi(2);
        Ok(binomial(self.n as u64, a as u64) * s.powi(a as i32) * (1.0 - s).powi((self.n - a) as i32))
    }

    /// Schmidt weight `γ_b` of the 12|3 bipartition.
    pub fn gamma(&self, b: usize) -> Result<f64> {
        self.check_index(b)?;
        let (t, p, v) = (self.theta, self.phi, self.varphi);
        let head = (t.cos() * v.cos() + t.sin() * p.sin() * v.sin()).powi(2);
        let rest = (t.cos() * v.sin() - t.sin() * v.cos() * p.sin()).powi(2) + (p.cos() * t.sin()).powi(2);
        Ok(binomial(self.n as u64, b as u64) * head.powi(b as i32) * rest.powi((self.n - b) as i32))
    }

    pub fn alphas(&self) -> Vec<f64> {
        (0..=self.n).map(|a| self.alpha(a).unwrap()).collect()
    }

    pub fn gammas(&self) -> Vec<f64> {
        (0..=self.n).map(|b| self.gamma(b).unwrap()).collect()
    }

    /// Coefficient of `φ_a ⊗ φ_{n−a−b} ⊗ φ_b` in the state:
    /// `√(n!/(a!(n−a−b)!b!)) c₁^a c₂^{n−a−b} c₃^b`, zero when `a + b > n`.
    pub fn mixing_weight(&self, a: usize, b: usize) -> f64 {
        if a + b > self.n {
            return 0.0;
        }
        let mid = self.n - a - b;
        let [c1, c2, c3] = self.mode_direction();
        let ln_multi = ln_factorial(self.n as u64) - ln_factorial(a as u64) - ln_factorial(mid as u64) - ln_factorial(b as u64);
        (0.5 * ln_multi).exp() * c1.powi(a as i32) * c2.powi(mid as i32) * c3.powi(b as i32)
    }
}

/// Element tables and the chain assembled from them.
///
/// `a1[k][a] = C_{k,a} I_{k,a}`, `a2[l][a][b] = 𝟙_{a+b≤n} C_{l,n−a−b} I_{l,n−a−b}`
/// and `a3[m][b] = √γ_b C_{m,b} I_{m,b}`, for physical indices below the cutoff.
#[derive(Debug, Clone)]
pub struct OscillatorMpsBundle {
    pub a1: Vec<Vec<f64>>,
    pub a2: Vec<Vec<Vec<f64>>>,
    pub a3: Vec<Vec<f64>>,
    pub mps: MatrixProductState,
    pub params: OscillatorParams,
}

pub fn build_bundle(params: &OscillatorParams) -> Result<OscillatorMpsBundle> {
    let (n, d, w) = (params.n, params.phys_cutoff, params.omega_tilde);
    let gammas = params.gammas();

    let a1 = par::map_range(d, |k| (0..=n).map(|a| overlap(k, a, w)).collect::<Vec<_>>());
    let a2 = par::map_range(d, |l| {
        (0..=n)
            .map(|a| {
                (0..=n)
                    .map(|b| if a + b <= n { overlap(l, n - a - b, w) } else { 0.0 })
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>()
    });
    let a3 = par::map_range(d, |m| {
        (0..=n).map(|b| gammas[b].sqrt() * overlap(m, b, w)).collect::<Vec<_>>()
    });

    // weights that restore the multinomial split, with √γ_b moved to site 3
    let bridge: Vec<Vec<f64>> = (0..=n)
        .map(|a| {
            (0..=n)
                .map(|b| {
                    if gammas[b] > 0.0 {
                        params.mixing_weight(a, b) / gammas[b].sqrt()
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect();

    let real = |x: f64| C64::new(x, 0.0);
    let site1 = SiteTensor::from_fn(d, 1, n + 1, |k, _, a| real(a1[k][a]))?;
    let site2 = SiteTensor::from_fn(d, n + 1, n + 1, |l, a, b| real(a2[l][a][b] * bridge[a][b]))?;
    let site3 = SiteTensor::from_fn(d, n + 1, 1, |m, b, _| real(a3[m][b]))?;
    let mps = MatrixProductState::new(vec![site1, site2, site3], vec![], CanonicalForm::Unknown)?;

    Ok(OscillatorMpsBundle {
        a1,
        a2,
        a3,
        mps,
        params: *params,
    })
}

/// `ψ(x)` from the chain: each site is contracted with `f_0(x_i), …, f_{d−1}(x_i)`.
pub fn wavefunction_mps(bundle: &OscillatorMpsBundle, x: [f64; 3]) -> f64 {
    let sites = bundle.mps.sites();
    let d = bundle.params.phys_cutoff;
    let chi = bundle.params.n + 1;
    let f: Vec<Vec<f64>> = x.iter().map(|&xi| basis_values(d, xi)).collect();

    let v1: Vec<f64> = (0..chi)
        .map(|a| (0..d).map(|k| f[0][k] * sites[0].get(k, 0, a).re).sum())
        .collect();
    let v3: Vec<f64> = (0..chi)
        .map(|b| (0..d).map(|m| f[2][m] * sites[2].get(m, b, 0).re).sum())
        .collect();
    let mut total = 0.0;
    for (a, va) in v1.iter().enumerate() {
        for (b, vb) in v3.iter().enumerate() {
            let m2: f64 = (0..d).map(|l| f[1][l] * sites[1].get(l, a, b).re).sum();
            total += va * m2 * vb;
        }
    }
    total
}

/// Two-variable factor `φ_m(u·y) φ_0(u⊥·y)` for a unit `u`: the normalized
/// partner of one Schmidt vector, built directly in rotated coordinates.
fn rotated_pair(m: usize, omega: f64, u: (f64, f64), y: (f64, f64)) -> f64 {
    let along = u.0 * y.0 + u.1 * y.1;
    let across = -u.1 * y.0 + u.0 * y.1;
    scaled_basis(m, omega, along) * scaled_basis(0, omega, across)
}

fn unit_or_default(p: f64, q: f64) -> (f64, f64) {
    let r = p.hypot(q);
    if r > 0.0 {
        (p / r, q / r)
    } else {
        (1.0, 0.0)
    }
}

/// `ψ(x) = Σ_a √α_a φ_a(x₁) Θ_a(x₂, x₃)`, evaluated without the chain.
pub fn wavefunction_direct(params: &OscillatorParams, x: [f64; 3]) -> f64 {
    let [c1, c2, c3] = params.mode_direction();
    let u = unit_or_default(c2, c3);
    let w = params.omega_tilde;
    // the weights are nonnegative, so the sign of c₁^a rides on the vector
    let phi1 = scaled_values(params.n + 1, w, x[0]);
    params
        .alphas()
        .iter()
        .enumerate()
        .filter(|(_, &al)| al > 0.0)
        .map(|(a, &al)| {
            let sign = c1.signum().powi(a as i32);
            al.sqrt() * sign * phi1[a] * rotated_pair(params.n - a, w, u, (x[1], x[2]))
        })
        .sum()
}

/// `ψ(x) = Σ_b √γ_b Ξ_b(x₁, x₂) χ_b(x₃)`.
pub fn wavefunction_gamma_form(params: &OscillatorParams, x: [f64; 3]) -> f64 {
    let [c1, c2, c3] = params.mode_direction();
    let u = unit_or_default(c1, c2);
    let w = params.omega_tilde;
    let chi = scaled_values(params.n + 1, w, x[2]);
    params
        .gammas()
        .iter()
        .enumerate()
        .filter(|(_, &g)| g > 0.0)
        .map(|(b, &g)| {
            let sign = c3.signum().powi(b as i32);
            g.sqrt() * rotated_pair(params.n - b, w, u, (x[0], x[1])) * sign * chi[b]
        })
        .sum()
}

/// `(ω̃/π)^{3/4} / √(n! 2^n) · e^{−ω̃|x|²/2} H_n(√ω̃ c·x)`.
pub fn wavefunction_closed(params: &OscillatorParams, x: [f64; 3]) -> f64 {
    let c = params.mode_direction();
    let w = params.omega_tilde;
    let along: f64 = c.iter().zip(&x).map(|(a, b)| a * b).sum();
    let r2: f64 = x.iter().map(|v| v * v).sum();
    let across2 = (r2 - along * along).max(0.0);
    scaled_basis(params.n, w, along) * (w / std::f64::consts::PI).sqrt() * (-0.5 * w * across2).exp()
}

pub fn wavefunction_mps_batch(bundle: &OscillatorMpsBundle, points: &[[f64; 3]]) -> Vec<f64> {
    par::map(points, |&x| wavefunction_mps(bundle, x))
}

pub fn wavefunction_direct_batch(params: &OscillatorParams, points: &[[f64; 3]]) -> Vec<f64> {
    par::map(points, |&x| wavefunction_direct(params, x))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Element {
    A1,
    A2,
    A3,
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Element::A1 => "A1",
            Element::A2 => "A2",
            Element::A3 => "A3",
        })
    }
}

impl FromStr for Element {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "A1" => Ok(Element::A1),
            "A2" => Ok(Element::A2),
            "A3" => Ok(Element::A3),
            _ => Err(Error::InvalidParams(format!("unknown element table {s:?}"))),
        }
    }
}

/// One point of a decay curve: `|element|` at physical `index` in lane
/// `a` (and `b` for the middle site).
#[derive(Debug, Clone, PartialEq)]
pub struct DecayRow {
    pub which: Element,
    pub a: usize,
    pub b: Option<usize>,
    pub index: usize,
    pub magnitude: f64,
}

/// Magnitudes along the physical index for every lane that is not identically
/// zero. For `A1` the lane label is `a`, for `A3` it is `b` (reported in `a`).
pub fn element_decay_table(bundle: &OscillatorMpsBundle, which: Element) -> Vec<DecayRow> {
    let n = bundle.params.n;
    let lanes: Vec<(usize, Option<usize>)> = match which {
        Element::A1 | Element::A3 => (0..=n).map(|a| (a, None)).collect(),
        Element::A2 => (0..=n).flat_map(|a| (0..=n).map(move |b| (a, Some(b)))).collect(),
    };
    let value = |k: usize, a: usize, b: Option<usize>| match which {
        Element::A1 => bundle.a1[k][a],
        Element::A2 => bundle.a2[k][a][b.unwrap_or(0)],
        Element::A3 => bundle.a3[k][a],
    };
    let d = bundle.params.phys_cutoff;
    lanes
        .into_iter()
        .filter(|&(a, b)| (0..d).any(|k| value(k, a, b) != 0.0))
        .flat_map(|(a, b)| {
            (0..d).map(move |k| DecayRow {
                which,
                a,
                b,
                index: k,
                magnitude: value(k, a, b).abs(),
            })
        })
        .collect()
}
