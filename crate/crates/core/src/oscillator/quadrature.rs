//! Gauss–Hermite quadrature, used as an independent check on the closed form.
//!
//! Nodes, weights and the integrand run in double-double arithmetic: the
//! Hermite products being integrated reach ~1e25 while some integrals are
//! O(1e3), and plain `f64` cannot resolve that cancellation.

use std::f64::consts::PI;

use twofloat::TwoFloat;

use crate::error::{Error, Result};

type Dd = TwoFloat;

fn dd(x: f64) -> Dd {
    Dd::from(x)
}

// `twofloat`'s division and square root are only good to about one ulp of
// `f64`; one Newton correction brings them to full double-double accuracy.
fn div(a: Dd, b: Dd) -> Dd {
    let q = a / b;
    q + dd((a - q * b).hi() / b.hi())
}

fn sqrt(a: Dd) -> Dd {
    let r = a.sqrt();
    if r.hi() == 0.0 {
        return r;
    }
    r + dd((a - r * r).hi() / (2.0 * r.hi()))
}

/// `n`-point rule for `∫ e^{-x²} g(x) dx`, stored as the positive nodes (with
/// weights) plus the weight of the node at zero when `n` is odd. Summing
/// mirrored pairs makes odd integrands cancel exactly.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    positive: Vec<(Dd, Dd)>,
    center: Option<Dd>,
}

impl GaussHermite {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InsufficientNodes { points: 0, degree: 0 });
        }
        let rec = Recurrence::new(n);
        let nf = n as f64;
        let mut guesses: Vec<f64> = Vec::with_capacity(n / 2);
        let mut z = 0.0;
        for i in 0..n / 2 {
            // asymptotic starting guesses for the largest roots first
            z = match i {
                0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-0.16667),
                1 => z - 1.14 * nf.powf(0.426) / z,
                2 => 1.86 * z - 0.86 * guesses[0],
                3 => 1.91 * z - 0.91 * guesses[1],
                _ => 2.0 * z - guesses[i - 2],
            };
            for _ in 0..100 {
                let (p, dp) = rec.eval_f64(z);
                let step = p / dp;
                z -= step;
                if step.abs() <= 1e-15 * z.abs() {
                    break;
                }
            }
            guesses.push(z);
        }
        let mut roots: Vec<(Dd, Dd)> = guesses
            .iter()
            .map(|&g| {
                let mut z = dd(g);
                for _ in 0..3 {
                    let (p, dp) = rec.eval(z);
                    z -= div(p, dp);
                }
                let (_, dp) = rec.eval(z);
                (z, div(dd(2.0), dp * dp))
            })
            .collect();
        roots.reverse();
        let center = (n % 2 == 1).then(|| {
            let (_, dp) = rec.eval(dd(0.0));
            div(dd(2.0), dp * dp)
        });
        Ok(Self { positive: roots, center })
    }

    pub fn len(&self) -> usize {
        2 * self.positive.len() + self.center.is_some() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All `(node, weight)` pairs in ascending node order, rounded to `f64`.
    pub fn nodes(&self) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = self.positive.iter().rev().map(|(x, w)| (-x.hi(), w.hi())).collect();
        out.extend(self.center.map(|w| (0.0, w.hi())));
        out.extend(self.positive.iter().map(|(x, w)| (x.hi(), w.hi())));
        out
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, g: F) -> f64 {
        let pairs: f64 = self
            .positive
            .iter()
            .map(|(x, w)| w.hi() * (g(x.hi()) + g(-x.hi())))
            .sum();
        pairs + self.center.map_or(0.0, |w| w.hi() * g(0.0))
    }

    fn integrate_dd<F: Fn(Dd) -> Dd>(&self, g: F) -> Dd {
        let mut acc = self.center.map_or(dd(0.0), |w| w * g(dd(0.0)));
        for &(x, w) in &self.positive {
            acc += w * (g(x) + g(-x));
        }
        acc
    }
}

/// Orthonormal Hermite polynomial `p_n` (weight `e^{-x²}`) and its derivative
/// `√(2n) p_{n-1}`, with the recurrence coefficients precomputed.
struct Recurrence {
    n: usize,
    a: Vec<Dd>,
    b: Vec<Dd>,
    start: Dd,
}

impl Recurrence {
    fn new(n: usize) -> Self {
        let a = (0..n).map(|j| sqrt(div(dd(2.0), dd((j + 1) as f64)))).collect();
        let b = (0..n).map(|j| sqrt(div(dd(j as f64), dd((j + 1) as f64)))).collect();
        let start = div(dd(1.0), sqrt(sqrt(twofloat::consts::PI)));
        Self { n, a, b, start }
    }

    fn eval(&self, z: Dd) -> (Dd, Dd) {
        let (mut p1, mut p2) = (self.start, dd(0.0));
        for j in 0..self.n {
            let p3 = p2;
            p2 = p1;
            p1 = z * self.a[j] * p2 - self.b[j] * p3;
        }
        (p1, sqrt(dd(2.0 * self.n as f64)) * p2)
    }

    fn eval_f64(&self, z: f64) -> (f64, f64) {
        let (mut p1, mut p2) = (PI.powf(-0.25), 0.0);
        for j in 0..self.n {
            let p3 = p2;
            p2 = p1;
            p1 = z * self.a[j].hi() * p2 - self.b[j].hi() * p3;
        }
        (p1, (2.0 * self.n as f64).sqrt() * p2)
    }
}

fn hermite_dd(j: usize, x: Dd) -> Dd {
    let (mut prev, mut cur) = (dd(0.0), dd(1.0));
    for k in 0..j {
        let next = dd(2.0) * x * cur - dd(2.0 * k as f64) * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `(node, weight)` pairs of the `n`-point Gauss–Hermite rule.
pub fn gauss_hermite(n: usize) -> Result<Vec<(f64, f64)>> {
    Ok(GaussHermite::new(n)?.nodes())
}

/// `I_{i,j}` by quadrature. The substitution `x = y √(2/(1+ω̃))` turns the
/// Gaussian into `e^{-y²}`, leaving a polynomial of degree `i + j`, which an
/// `m`-point rule integrates exactly once `2m − 1 ≥ i + j`.
pub fn integral_i_quadrature(i: usize, j: usize, omega: f64, points: usize) -> Result<f64> {
    if points < (i + j) / 2 + 1 {
        return Err(Error::InsufficientNodes {
            points,
            degree: i + j,
        });
    }
    let s = sqrt(div(dd(2.0), dd(1.0) + dd(omega)));
    let t = sqrt(dd(omega)) * s;
    let gh = GaussHermite::new(points)?;
    Ok((s * gh.integrate_dd(|y| hermite_dd(i, s * y) * hermite_dd(j, t * y))).hi())
}
