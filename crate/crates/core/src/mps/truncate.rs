use crate::error::Result;
use crate::mps::construct::{from_dense_vidal, DecomposeOptions};
use crate::mps::contract::to_dense;
use crate::mps::{BondSpectrum, CanonicalForm, MatrixProductState, TruncationPolicy};
use crate::tensor::low_rank_error;

#[derive(Debug, Clone)]
pub struct Truncation {
    pub mps: MatrixProductState,
    /// Discarded weight `sqrt(Σ λ²_dropped)` per cut.
    pub errors: Vec<f64>,
}

/// Cuts every bond down to what `policy` allows.
///
/// Vidal chains are truncated in place by dropping the smallest Schmidt modes
/// at each bond. Any other chain is first rebuilt in Vidal form through a dense
/// round trip. A truncation at a single bond is the best approximation across
/// that bipartition, so its Hilbert-norm error equals the reported discarded
/// weight. The result keeps the Vidal tag only while it is still canonical
/// (nothing dropped, or a single bond).
pub fn truncate(m: &MatrixProductState, policy: &TruncationPolicy, rank_tol: f64) -> Result<Truncation> {
    let vidal;
    let m = if m.form() == CanonicalForm::Vidal && m.bonds().iter().all(Option::is_some) {
        m
    } else {
        let opts = DecomposeOptions {
            rank_tol,
            policy: None,
        };
        vidal = from_dense_vidal(&to_dense(m)?, &opts)?.mps;
        &vidal
    };

    let n = m.len();
    let mut keep = Vec::with_capacity(n - 1);
    let mut errors = Vec::with_capacity(n - 1);
    let mut bonds = Vec::with_capacity(n - 1);
    for b in m.bonds().iter().flatten() {
        let k = policy.keep_count(b.values());
        errors.push(low_rank_error(b.values(), k)?);
        bonds.push(Some(BondSpectrum::new(b.values()[..k].to_vec())?));
        keep.push(k);
    }

    let sites = m
        .sites()
        .iter()
        .enumerate()
        .map(|(j, s)| {
            let left = if j == 0 { 1 } else { keep[j - 1] };
            let right = if j == n - 1 { 1 } else { keep[j] };
            s.restrict(left, right)
        })
        .collect();

    let dropped = m.bond_dims().iter().zip(&keep).any(|(d, k)| d != k);
    let form = if dropped && n > 2 {
        CanonicalForm::Unknown
    } else {
        CanonicalForm::Vidal
    };
    Ok(Truncation {
        mps: MatrixProductState::new(sites, bonds, form)?,
        errors,
    })
}
