//! Dense tensor → MPS by successive SVDs.
//!
//! The right sweep peels sites off the end: at site `n` the block
//! `(prefix) × (k_n, a_n)` is split as `U S V†`, `V†` becomes the
//! right-normalized `B` tensor and `U S` is carried left. The left sweep is the
//! mirror image. Mixed and Vidal forms are built from the same two steps.

use crate::error::{Error, Result};
use crate::mps::{BondSpectrum, CanonicalForm, MatrixProductState, SiteTensor, TruncationPolicy};
use crate::tensor::{low_rank_error, row_major, svd, CMatrix, DenseTensor, SvdResult, C64, DEFAULT_RANK_TOL};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecomposeOptions {
    /// Singular values `≤ rank_tol · s_max` are treated as exact zeros.
    pub rank_tol: f64,
    pub policy: Option<TruncationPolicy>,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        Self {
            rank_tol: DEFAULT_RANK_TOL,
            policy: None,
        }
    }
}

impl DecomposeOptions {
    pub fn with_policy(policy: TruncationPolicy) -> Self {
        Self {
            policy: Some(policy),
            ..Self::default()
        }
    }
}

/// A constructed MPS together with the discarded weight at each cut
/// (`errors[n - 1]` for cut `n`).
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub mps: MatrixProductState,
    pub errors: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormRequest {
    Left,
    Right,
    Mixed(usize),
    Vidal,
}

pub fn from_dense(t: &DenseTensor, form: FormRequest, opts: &DecomposeOptions) -> Result<Decomposition> {
    match form {
        FormRequest::Left => from_dense_left_canonical(t, opts),
        FormRequest::Right => from_dense_right_canonical(t, opts),
        FormRequest::Mixed(center) => from_dense_mixed_canonical(t, center, opts),
        FormRequest::Vidal => from_dense_vidal(t, opts),
    }
}

/// SVD followed by the truncation policy.
fn split(m: &CMatrix, opts: &DecomposeOptions) -> Result<(SvdResult, f64)> {
    let r = svd(m, opts.rank_tol)?;
    if r.rank == 0 {
        return Err(Error::ZeroState);
    }
    match &opts.policy {
        None => Ok((r, 0.0)),
        Some(p) => {
            let keep = p.keep_count(&r.s);
            let err = low_rank_error(&r.s, keep)?;
            Ok((r.truncated(keep), err))
        }
    }
}

fn check_nonzero(t: &DenseTensor) -> Result<()> {
    if t.norm() == 0.0 {
        return Err(Error::ZeroState);
    }
    Ok(())
}

struct Sweep {
    /// In chain order.
    sites: Vec<SiteTensor>,
    /// In cut order.
    spectra: Vec<Vec<f64>>,
    errors: Vec<f64>,
    /// Row-major remainder.
    rest: Vec<C64>,
    bond: usize,
}

/// Left-normalizes the first `count` entries of `dims`. `work` is a row-major
/// block `(bond, dims..., trailing)`.
fn sweep_left(
    mut work: Vec<C64>,
    mut bond: usize,
    dims: &[usize],
    count: usize,
    opts: &DecomposeOptions,
) -> Result<Sweep> {
    let mut out = Sweep {
        sites: Vec::with_capacity(count),
        spectra: Vec::with_capacity(count),
        errors: Vec::with_capacity(count),
        rest: Vec::new(),
        bond,
    };
    for &d in &dims[..count] {
        let rows = bond * d;
        let cols = work.len() / rows;
        let m = CMatrix::from_row_slice(rows, cols, &work);
        let (r, err) = split(&m, opts)?;
        let site = SiteTensor::from_fn(d, bond, r.rank, |k, l, a| r.u[(l * d + k, a)])?;
        let mut svh = r.vh.clone();
        for (i, &s) in r.s.iter().enumerate() {
            svh.row_mut(i).scale_mut(s);
        }
        work = row_major(&svh);
        bond = r.rank;
        out.sites.push(site);
        out.spectra.push(r.s);
        out.errors.push(err);
    }
    out.rest = work;
    out.bond = bond;
    Ok(out)
}

/// Right-normalizes the last `count` entries of `dims`. `work` is a row-major
/// block `(leading, dims..., bond)`.
fn sweep_right(
    mut work: Vec<C64>,
    dims: &[usize],
    mut bond: usize,
    count: usize,
    opts: &DecomposeOptions,
) -> Result<Sweep> {
    let mut out = Sweep {
        sites: Vec::with_capacity(count),
        spectra: Vec::with_capacity(count),
        errors: Vec::with_capacity(count),
        rest: Vec::new(),
        bond,
    };
    for &d in dims[dims.len() - count..].iter().rev() {
        let cols = d * bond;
        let rows = work.len() / cols;
        let m = CMatrix::from_row_slice(rows, cols, &work);
        let (r, err) = split(&m, opts)?;
        let site = SiteTensor::from_fn(d, r.rank, bond, |k, a, b| r.vh[(a, k * bond + b)])?;
        let mut us = r.u.clone();
        for (i, &s) in r.s.iter().enumerate() {
            us.column_mut(i).scale_mut(s);
        }
        work = row_major(&us);
        bond = r.rank;
        out.sites.push(site);
        out.spectra.push(r.s);
        out.errors.push(err);
    }
    out.sites.reverse();
    out.spectra.reverse();
    out.errors.reverse();
    out.rest = work;
    out.bond = bond;
    Ok(out)
}

/// Right-canonical form: sites `2..=N` right-normalized, site 1 carries the
/// weights so that `Σ_k |B^{(k_1)}|² = ‖ψ‖²`.
pub fn from_dense_right_canonical(t: &DenseTensor, opts: &DecomposeOptions) -> Result<Decomposition> {
    check_nonzero(t)?;
    let dims = t.shape();
    let n = dims.len();
    let sweep = sweep_right(t.data().to_vec(), dims, 1, n - 1, opts)?;
    let bond = sweep.bond;
    let rest = &sweep.rest;
    let first = SiteTensor::from_fn(dims[0], 1, bond, |k, _, a| rest[k * bond + a])?;
    let mut sites = vec![first];
    sites.extend(sweep.sites);
    Ok(Decomposition {
        mps: MatrixProductState::new(sites, vec![], CanonicalForm::Right)?,
        errors: sweep.errors,
    })
}

/// Left-canonical form: sites `1..N` left-normalized, site `N` carries the
/// weights.
pub fn from_dense_left_canonical(t: &DenseTensor, opts: &DecomposeOptions) -> Result<Decomposition> {
    check_nonzero(t)?;
    let dims = t.shape();
    let n = dims.len();
    let mut sweep = sweep_left(t.data().to_vec(), 1, dims, n - 1, opts)?;
    let bond = sweep.bond;
    let d = dims[n - 1];
    let rest = &sweep.rest;
    let last = SiteTensor::from_fn(d, bond, 1, |k, a, _| rest[a * d + k])?;
    sweep.sites.push(last);
    Ok(Decomposition {
        mps: MatrixProductState::new(sweep.sites, vec![], CanonicalForm::Left)?,
        errors: sweep.errors,
    })
}

/// Mixed-canonical form around bond `center` (`1..N`): sites `1..=center`
/// left-normalized, sites after it right-normalized, and the Schmidt spectrum
/// across `(1..=center) : (center+1..=N)` stored on that bond.
pub fn from_dense_mixed_canonical(
    t: &DenseTensor,
    center: usize,
    opts: &DecomposeOptions,
) -> Result<Decomposition> {
    let dims = t.shape();
    let n = dims.len();
    if center == 0 || center >= n {
        return Err(Error::CenterOutOfRange {
            center,
            max: n.saturating_sub(1),
        });
    }
    check_nonzero(t)?;

    // right procedure down to the center leaves λ·x on the left block
    let right = sweep_right(t.data().to_vec(), dims, 1, n - center, opts)?;
    let center_bond = right.bond;
    let left = sweep_left(right.rest, 1, &dims[..center], center - 1, opts)?;

    // (a_{c-1}, k_c) × a_c block; its SVD diagonalizes the center weights
    let d = dims[center - 1];
    let rows = left.bond * d;
    let m = CMatrix::from_row_slice(rows, center_bond, &left.rest);
    let r = svd(&m, opts.rank_tol)?;
    if r.rank == 0 {
        return Err(Error::ZeroState);
    }
    let a_center = SiteTensor::from_fn(d, left.bond, r.rank, |k, l, a| r.u[(l * d + k, a)])?;
    let mut right_sites = right.sites;
    right_sites[0] = right_sites[0].contract_left(&r.vh);

    let mut sites = left.sites;
    sites.push(a_center);
    sites.extend(right_sites);

    let mut bonds = vec![None; n - 1];
    bonds[center - 1] = Some(BondSpectrum::new(r.s)?);

    let mut errors = left.errors;
    errors.extend(right.errors);
    Ok(Decomposition {
        mps: MatrixProductState::new(sites, bonds, CanonicalForm::Mixed { center })?,
        errors,
    })
}

/// Vidal form `Γ_1 Λ_1 Γ_2 Λ_2 ··· Λ_{N−1} Γ_N`.
///
/// Each step expands the current right Schmidt vectors `y_{a_{n−1}}` as
/// `Σ τ^{(k_n)}_{a_{n−1},a_n} y'_{a_n}` in the next cut's right Schmidt vectors
/// and sets `Γ = τ / λ_{a_n}`. Modes at the rank cut are never divided by.
pub fn from_dense_vidal(t: &DenseTensor, opts: &DecomposeOptions) -> Result<Decomposition> {
    check_nonzero(t)?;
    let dims = t.shape().to_vec();
    let n = dims.len();
    if n == 1 {
        let site = SiteTensor::new(dims[0], 1, 1, t.data().to_vec())?;
        return Ok(Decomposition {
            mps: MatrixProductState::new(vec![site], vec![], CanonicalForm::Vidal)?,
            errors: vec![],
        });
    }

    let first = t.matricize(1)?;
    let (r, err) = split(&first, opts)?;
    let mut sites = vec![SiteTensor::from_fn(dims[0], 1, r.rank, |k, _, a| r.u[(k, a)])?];
    let mut bonds = vec![Some(BondSpectrum::new(r.s.clone())?)];
    let mut errors = vec![err];
    let mut lambda = r.s;
    let mut y = r.vh;

    for &d in &dims[1..n - 1] {
        let bond = lambda.len();
        let cols = y.len() / (bond * d);
        let yr = CMatrix::from_row_slice(bond * d, cols, &row_major(&y));
        let mut weighted = yr.clone();
        for (a, &l) in lambda.iter().enumerate() {
            for k in 0..d {
                weighted.row_mut(a * d + k).scale_mut(l);
            }
        }
        let (r, err) = split(&weighted, opts)?;
        let tau = &yr * r.vh.adjoint();
        let s = &r.s;
        sites.push(SiteTensor::from_fn(d, bond, r.rank, |k, a, b| {
            tau[(a * d + k, b)] / s[b]
        })?);
        bonds.push(Some(BondSpectrum::new(r.s.clone())?));
        errors.push(err);
        lambda = r.s;
        y = r.vh;
    }

    let d = dims[n - 1];
    sites.push(SiteTensor::from_fn(d, lambda.len(), 1, |k, a, _| y[(a, k)])?);
    Ok(Decomposition {
        mps: MatrixProductState::new(sites, bonds, CanonicalForm::Vidal)?,
        errors,
    })
}
