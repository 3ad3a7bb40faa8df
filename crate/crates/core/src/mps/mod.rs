//! Open-boundary matrix product states.
//!
//! A state on `N` sites is a chain of site tensors `M[k](a_left, a_right)`
//! optionally interleaved with diagonal bond weights:
//!
//! ```text
//!   M_1 --Λ_1-- M_2 --Λ_2-- ... --Λ_{N-1}-- M_N
//!    |           |                           |
//!   k_1         k_2                         k_N
//! ```
//!
//! The outer bonds of `M_1` and `M_N` have dimension 1. Bonds are addressed by
//! their cut `n` (the number of sites to the left), so `n` runs over `1..N`.
//! Sites are addressed by their 0-based position.
//!
//! Which gauge conditions hold is recorded in [`CanonicalForm`], but nothing
//! downstream trusts the tag without checking: see [`verify`].

mod construct;
mod contract;
mod spectrum;
mod truncate;
pub mod verify;

pub use construct::{
    from_dense, from_dense_left_canonical, from_dense_mixed_canonical,
    from_dense_right_canonical, from_dense_vidal, Decomposition, DecomposeOptions, FormRequest,
};
pub use contract::{apply_site_map, coefficient, to_dense};
pub use spectrum::{bond_spectrum, entanglement_entropy};
pub use truncate::{truncate, Truncation};
pub use verify::{
    verify_form, verify_left_normalized, verify_mixed, verify_right_normalized, verify_vidal,
    FormReport, NormalizationReport, VidalReport,
};

use std::fmt;

use crate::error::{Error, Result};
use crate::tensor::{CMatrix, C64};

/// Three-index site array, entry `(k, a_left, a_right)` stored at
/// `(k * left_dim + a_left) * right_dim + a_right`.
#[derive(Debug, Clone, PartialEq)]
pub struct SiteTensor {
    phys_dim: usize,
    left_dim: usize,
    right_dim: usize,
    data: Vec<C64>,
}

impl SiteTensor {
    pub fn new(phys_dim: usize, left_dim: usize, right_dim: usize, data: Vec<C64>) -> Result<Self> {
        if phys_dim == 0 || left_dim == 0 || right_dim == 0 {
            return Err(Error::EmptyShape);
        }
        let expected = phys_dim * left_dim * right_dim;
        if data.len() != expected {
            return Err(Error::ShapeMismatch {
                expected,
                actual: data.len(),
            });
        }
        Ok(Self {
            phys_dim,
            left_dim,
            right_dim,
            data,
        })
    }

    pub fn zeros(phys_dim: usize, left_dim: usize, right_dim: usize) -> Result<Self> {
        Self::new(
            phys_dim,
            left_dim,
            right_dim,
            vec![C64::new(0.0, 0.0); phys_dim * left_dim * right_dim],
        )
    }

    /// Builds a site from a closure over `(k, a_left, a_right)`.
    pub fn from_fn(
        phys_dim: usize,
        left_dim: usize,
        right_dim: usize,
        mut f: impl FnMut(usize, usize, usize) -> C64,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(phys_dim * left_dim * right_dim);
        for k in 0..phys_dim {
            for l in 0..left_dim {
                for r in 0..right_dim {
                    data.push(f(k, l, r));
                }
            }
        }
        Self::new(phys_dim, left_dim, right_dim, data)
    }

    pub fn phys_dim(&self) -> usize {
        self.phys_dim
    }

    pub fn left_dim(&self) -> usize {
        self.left_dim
    }

    pub fn right_dim(&self) -> usize {
        self.right_dim
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, k: usize, left: usize, right: usize) -> C64 {
        self.data[(k * self.left_dim + left) * self.right_dim + right]
    }

    #[inline]
    pub fn set(&mut self, k: usize, left: usize, right: usize, value: C64) {
        self.data[(k * self.left_dim + left) * self.right_dim + right] = value;
    }

    /// The `left_dim × right_dim` matrix `M[k]`.
    pub fn slice(&self, k: usize) -> CMatrix {
        let block = self.left_dim * self.right_dim;
        CMatrix::from_row_slice(
            self.left_dim,
            self.right_dim,
            &self.data[k * block..(k + 1) * block],
        )
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self {
            data: self.data.iter().map(|z| z * factor).collect(),
            ..self.clone()
        }
    }

    /// Multiplies the left bond by `m` (`new_left × left_dim`).
    pub(crate) fn contract_left(&self, m: &CMatrix) -> Self {
        let new_left = m.nrows();
        Self::from_fn(self.phys_dim, new_left, self.right_dim, |k, l, r| {
            (0..self.left_dim).map(|a| m[(l, a)] * self.get(k, a, r)).sum()
        })
        .expect("dimensions are positive")
    }

    /// Keeps the listed left/right bond indices.
    pub(crate) fn restrict(&self, left: usize, right: usize) -> Self {
        Self::from_fn(self.phys_dim, left, right, |k, l, r| self.get(k, l, r))
            .expect("dimensions are positive")
    }
}

/// Diagonal bond weights; positive and nonincreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct BondSpectrum(Vec<f64>);

impl BondSpectrum {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let positive = values.iter().all(|&v| v > 0.0 && v.is_finite());
        let ordered = values.windows(2).all(|w| w[0] >= w[1]);
        if values.is_empty() || !positive || !ordered {
            return Err(Error::InvalidSpectrum);
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CanonicalForm {
    Left,
    Right,
    /// Sites `1..=center` left-normalized, the rest right-normalized, and the
    /// Schmidt spectrum stored on bond `center`.
    Mixed { center: usize },
    Vidal,
    Unknown,
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CanonicalForm::Left => write!(f, "left"),
            CanonicalForm::Right => write!(f, "right"),
            CanonicalForm::Mixed { center } => write!(f, "mixed:{center}"),
            CanonicalForm::Vidal => write!(f, "vidal"),
            CanonicalForm::Unknown => write!(f, "unknown"),
        }
    }
}

impl std::str::FromStr for CanonicalForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::FormMismatch {
            expected: "left|right|mixed:<n>|vidal|unknown".into(),
            found: s.into(),
        };
        match s {
            "left" => Ok(CanonicalForm::Left),
            "right" => Ok(CanonicalForm::Right),
            "vidal" => Ok(CanonicalForm::Vidal),
            "unknown" => Ok(CanonicalForm::Unknown),
            _ => {
                let center = s.strip_prefix("mixed:").ok_or_else(bad)?;
                let center = center.parse().map_err(|_| bad())?;
                Ok(CanonicalForm::Mixed { center })
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixProductState {
    sites: Vec<SiteTensor>,
    bonds: Vec<Option<BondSpectrum>>,
    form: CanonicalForm,
}

impl MatrixProductState {
    /// Validates the dimension chain. `bonds` must be empty or hold exactly
    /// `N − 1` entries.
    pub fn new(
        sites: Vec<SiteTensor>,
        bonds: Vec<Option<BondSpectrum>>,
        form: CanonicalForm,
    ) -> Result<Self> {
        let n = sites.len();
        if n == 0 {
            return Err(Error::EmptyShape);
        }
        let bonds = if bonds.is_empty() { vec![None; n - 1] } else { bonds };
        if bonds.len() != n - 1 {
            return Err(Error::LengthMismatch {
                expected: n - 1,
                actual: bonds.len(),
            });
        }
        if sites[0].left_dim != 1 {
            return Err(Error::DimChainBroken {
                bond: 0,
                left: 1,
                right: sites[0].left_dim,
            });
        }
        if sites[n - 1].right_dim != 1 {
            return Err(Error::DimChainBroken {
                bond: n,
                left: sites[n - 1].right_dim,
                right: 1,
            });
        }
        for cut in 1..n {
            let left = sites[cut - 1].right_dim;
            let right = sites[cut].left_dim;
            if left != right {
                return Err(Error::DimChainBroken { bond: cut, left, right });
            }
            if let Some(b) = &bonds[cut - 1] {
                if b.len() != left {
                    return Err(Error::DimChainBroken {
                        bond: cut,
                        left,
                        right: b.len(),
                    });
                }
            }
        }
        if let CanonicalForm::Mixed { center } = form {
            if center == 0 || center >= n {
                return Err(Error::CenterOutOfRange { center, max: n - 1 });
            }
        }
        Ok(Self { sites, bonds, form })
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn sites(&self) -> &[SiteTensor] {
        &self.sites
    }

    pub fn site(&self, index: usize) -> Result<&SiteTensor> {
        self.sites.get(index).ok_or(Error::IndexOutOfRange {
            index,
            dim: self.sites.len(),
        })
    }

    /// All `N − 1` bond slots; `bonds()[n - 1]` is bond `n`.
    pub fn bonds(&self) -> &[Option<BondSpectrum>] {
        &self.bonds
    }

    pub fn bond(&self, cut: usize) -> Result<Option<&BondSpectrum>> {
        self.check_cut(cut)?;
        Ok(self.bonds[cut - 1].as_ref())
    }

    pub fn form(&self) -> CanonicalForm {
        self.form
    }

    pub fn phys_dims(&self) -> Vec<usize> {
        self.sites.iter().map(|s| s.phys_dim).collect()
    }

    /// Dimensions of the `N − 1` internal bonds.
    pub fn bond_dims(&self) -> Vec<usize> {
        self.sites[..self.sites.len() - 1]
            .iter()
            .map(|s| s.right_dim)
            .collect()
    }

    pub fn max_bond_dim(&self) -> usize {
        self.bond_dims().into_iter().max().unwrap_or(1)
    }

    /// Same tensors under a different form tag.
    pub fn with_form(&self, form: CanonicalForm) -> Result<Self> {
        Self::new(self.sites.clone(), self.bonds.clone(), form)
    }

    /// Replaces the weights on bond `cut`.
    pub fn with_bond(&self, cut: usize, spectrum: Option<BondSpectrum>) -> Result<Self> {
        self.check_cut(cut)?;
        let mut bonds = self.bonds.clone();
        bonds[cut - 1] = spectrum;
        Self::new(self.sites.clone(), bonds, self.form)
    }

    /// Replaces the site at `index`.
    pub fn with_site(&self, index: usize, site: SiteTensor) -> Result<Self> {
        self.site(index)?;
        let mut sites = self.sites.clone();
        sites[index] = site;
        Self::new(sites, self.bonds.clone(), self.form)
    }

    pub(crate) fn check_cut(&self, cut: usize) -> Result<()> {
        let n = self.sites.len();
        if cut == 0 || cut >= n {
            return Err(Error::CutOutOfRange {
                cut,
                max: n.saturating_sub(1),
            });
        }
        Ok(())
    }
}

/// Bond-dimension cap and/or per-cut discarded-weight budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    max_bond: Option<usize>,
    weight_tol: Option<f64>,
}

impl TruncationPolicy {
    pub fn new(max_bond: Option<usize>, weight_tol: Option<f64>) -> Result<Self> {
        if max_bond.is_none() && weight_tol.is_none() {
            return Err(Error::PolicyEmpty);
        }
        if max_bond == Some(0) {
            return Err(Error::InvalidPolicy("max_bond must be at least 1".into()));
        }
        if let Some(eps) = weight_tol {
            if !(eps >= 0.0 && eps.is_finite()) {
                return Err(Error::InvalidPolicy(format!("weight_tol {eps} must be finite and ≥ 0")));
            }
        }
        Ok(Self {
            max_bond,
            weight_tol,
        })
    }

    pub fn max_bond(chi: usize) -> Result<Self> {
        Self::new(Some(chi), None)
    }

    pub fn weight_tol(eps: f64) -> Result<Self> {
        Self::new(None, Some(eps))
    }

    pub fn max_bond_limit(&self) -> Option<usize> {
        self.max_bond
    }

    pub fn weight_tol_limit(&self) -> Option<f64> {
        self.weight_tol
    }

    /// Number of leading values of the nonincreasing list `s` to keep: at most
    /// `max_bond`, and the fewest whose discarded tail stays within
    /// `weight_tol`. Never less than one.
    pub fn keep_count(&self, s: &[f64]) -> usize {
        let mut keep = s.len();
        if let Some(chi) = self.max_bond {
            keep = keep.min(chi);
        }
        if let Some(eps) = self.weight_tol {
            let budget = eps * eps;
            let mut tail = 0.0;
            let mut k = s.len();
            while k > 1 {
                let next = tail + s[k - 1] * s[k - 1];
                if next > budget {
                    break;
                }
                tail = next;
                k -= 1;
            }
            keep = keep.min(k);
        }
        keep.max(1).min(s.len())
    }
}
