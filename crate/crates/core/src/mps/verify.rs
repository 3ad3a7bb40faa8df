//! Gauge checks.
//!
//! Left normalization of a site means `Σ_k M[k]† M[k] = I` over its right bond,
//! right normalization means `Σ_k M[k] M[k]† = I` over its left bond. The
//! weight-carrying boundary site of a left (right) canonical chain instead
//! satisfies `Σ_k |M[k]|² = ‖ψ‖²`, which is only compared to 1 when the caller
//! says the state is normalized.

use crate::error::{Error, Result};
use crate::mps::contract::{left_block, right_block};
use crate::mps::{CanonicalForm, MatrixProductState, SiteTensor};
use crate::par;
use crate::tensor::{max_abs, CMatrix};

#[derive(Debug, Clone, PartialEq)]
pub struct NormalizationReport {
    /// One entry per site. Isometric sites hold `max |G − I|`; the boundary
    /// site of a left/right check holds `|‖ψ‖² − 1|`.
    pub residuals: Vec<f64>,
    /// Which entries of `residuals` count towards `passed`.
    pub required: Vec<bool>,
    /// `‖ψ‖²` read off the weight-carrying boundary (or center bond).
    pub norm_sqr: f64,
    /// Largest required residual, if any site was required.
    pub worst_site: Option<usize>,
    pub passed: bool,
    pub tol: f64,
}

impl NormalizationReport {
    fn finish(residuals: Vec<f64>, required: Vec<bool>, norm_sqr: f64, extra_ok: bool, tol: f64) -> Self {
        let worst_site = residuals
            .iter()
            .enumerate()
            .filter(|(i, _)| required[*i])
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i);
        let passed = extra_ok
            && residuals
                .iter()
                .zip(&required)
                .all(|(r, &req)| !req || *r <= tol);
        Self {
            residuals,
            required,
            norm_sqr,
            worst_site,
            passed,
            tol,
        }
    }

    pub fn worst_residual(&self) -> f64 {
        self.worst_site.map(|i| self.residuals[i]).unwrap_or(0.0)
    }
}

/// `max |Σ_k M[k]† M[k] − I|`.
pub fn left_residual(site: &SiteTensor) -> f64 {
    let r = site.right_dim();
    let mut g = CMatrix::zeros(r, r);
    for k in 0..site.phys_dim() {
        let m = site.slice(k);
        g += m.adjoint() * &m;
    }
    max_abs(&(g - CMatrix::identity(r, r)))
}

/// `max |Σ_k M[k] M[k]† − I|`.
pub fn right_residual(site: &SiteTensor) -> f64 {
    let l = site.left_dim();
    let mut g = CMatrix::zeros(l, l);
    for k in 0..site.phys_dim() {
        let m = site.slice(k);
        g += &m * m.adjoint();
    }
    max_abs(&(g - CMatrix::identity(l, l)))
}

fn weight(site: &SiteTensor) -> f64 {
    site.data().iter().map(|z| z.norm_sqr()).sum()
}

/// Checks sites `1..N` for left normalization; site `N` is the boundary.
pub fn verify_left_normalized(m: &MatrixProductState, tol: f64, assert_normalized: bool) -> NormalizationReport {
    let n = m.len();
    let mut residuals = par::map(&m.sites()[..n - 1], left_residual);
    let norm_sqr = weight(&m.sites()[n - 1]);
    residuals.push((norm_sqr - 1.0).abs());
    let mut required = vec![true; n];
    required[n - 1] = assert_normalized;
    NormalizationReport::finish(residuals, required, norm_sqr, true, tol)
}

/// Checks sites `2..=N` for right normalization; site 1 is the boundary.
pub fn verify_right_normalized(m: &MatrixProductState, tol: f64, assert_normalized: bool) -> NormalizationReport {
    let norm_sqr = weight(&m.sites()[0]);
    let mut residuals = vec![(norm_sqr - 1.0).abs()];
    residuals.extend(par::map(&m.sites()[1..], right_residual));
    let mut required = vec![true; m.len()];
    required[0] = assert_normalized;
    NormalizationReport::finish(residuals, required, norm_sqr, true, tol)
}

/// Checks a mixed-canonical chain: sites up to the center left-normalized,
/// the rest right-normalized, `‖ψ‖² = Σ D²`.
pub fn verify_mixed(m: &MatrixProductState, tol: f64, assert_normalized: bool) -> Result<NormalizationReport> {
    let center = match m.form() {
        CanonicalForm::Mixed { center } => center,
        other => {
            return Err(Error::FormMismatch {
                expected: "mixed".into(),
                found: other.to_string(),
            })
        }
    };
    let d = m.bond(center)?.ok_or_else(|| Error::FormMismatch {
        expected: format!("weights on bond {center}"),
        found: "none".into(),
    })?;
    let residuals: Vec<f64> = par::map_range(m.len(), |i| {
        let s = &m.sites()[i];
        if i < center {
            left_residual(s)
        } else {
            right_residual(s)
        }
    });
    let norm_sqr = d.norm_sqr();
    let norm_ok = !assert_normalized || (norm_sqr - 1.0).abs() <= tol;
    Ok(NormalizationReport::finish(
        residuals,
        vec![true; m.len()],
        norm_sqr,
        norm_ok,
        tol,
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct VidalReport {
    /// `max |L_n† L_n − I|` for the left Schmidt family at each cut.
    pub left_residuals: Vec<f64>,
    /// `max |R_n R_n† − I|` for the right Schmidt family at each cut.
    pub right_residuals: Vec<f64>,
    /// `|Σλ_n² − Σλ_1²| / Σλ_1²`: every cut must carry the same norm.
    pub norm_residuals: Vec<f64>,
    pub passed: bool,
    pub tol: f64,
}

impl VidalReport {
    pub fn cut_residual(&self, cut: usize) -> f64 {
        let i = cut - 1;
        self.left_residuals[i]
            .max(self.right_residuals[i])
            .max(self.norm_residuals[i])
    }
}

/// Checks that every bond's weights are a Schmidt spectrum: the contracted
/// families `Γ_1 Λ_1 ··· Γ_n` and `Γ_{n+1} Λ_{n+1} ··· Γ_N` must both be
/// orthonormal at each cut.
pub fn verify_vidal(m: &MatrixProductState, tol: f64) -> Result<VidalReport> {
    if m.form() != CanonicalForm::Vidal {
        return Err(Error::FormMismatch {
            expected: "vidal".into(),
            found: m.form().to_string(),
        });
    }
    let n = m.len();
    let mut lambdas = Vec::with_capacity(n.saturating_sub(1));
    for b in m.bonds() {
        match b {
            Some(b) => lambdas.push(b.values()),
            None => {
                return Err(Error::FormMismatch {
                    expected: "weights on every bond".into(),
                    found: "missing bond".into(),
                })
            }
        }
    }

    let left_residuals = par::map_range(n - 1, |i| {
        let l = left_block(m, i + 1);
        let k = l.ncols();
        max_abs(&(l.adjoint() * &l - CMatrix::identity(k, k)))
    });
    let right_residuals = par::map_range(n - 1, |i| {
        let r = right_block(m, i + 1);
        let k = r.nrows();
        max_abs(&(&r * r.adjoint() - CMatrix::identity(k, k)))
    });
    let reference: f64 = lambdas.first().map(|l| l.iter().map(|v| v * v).sum()).unwrap_or(1.0);
    let norm_residuals: Vec<f64> = lambdas
        .iter()
        .map(|l| (l.iter().map(|v| v * v).sum::<f64>() - reference).abs() / reference)
        .collect();

    let passed = left_residuals
        .iter()
        .chain(&right_residuals)
        .chain(&norm_residuals)
        .all(|&r| r <= tol);
    Ok(VidalReport {
        left_residuals,
        right_residuals,
        norm_residuals,
        passed,
        tol,
    })
}

/// Result of [`verify_form`], dispatched on the form tag.
#[derive(Debug, Clone, PartialEq)]
pub enum FormReport {
    Normalization(NormalizationReport),
    Vidal(VidalReport),
}

impl FormReport {
    pub fn passed(&self) -> bool {
        match self {
            FormReport::Normalization(r) => r.passed,
            FormReport::Vidal(r) => r.passed,
        }
    }
}

/// Verifies whatever the form tag claims. `Unknown` claims nothing and is a
/// [`Error::FormMismatch`].
pub fn verify_form(m: &MatrixProductState, tol: f64, assert_normalized: bool) -> Result<FormReport> {
    match m.form() {
        CanonicalForm::Left => Ok(FormReport::Normalization(verify_left_normalized(m, tol, assert_normalized))),
        CanonicalForm::Right => Ok(FormReport::Normalization(verify_right_normalized(m, tol, assert_normalized))),
        CanonicalForm::Mixed { .. } => verify_mixed(m, tol, assert_normalized).map(FormReport::Normalization),
        CanonicalForm::Vidal => verify_vidal(m, tol).map(FormReport::Vidal),
        CanonicalForm::Unknown => Err(Error::FormMismatch {
            expected: "a canonical form".into(),
            found: "unknown".into(),
        }),
    }
}
