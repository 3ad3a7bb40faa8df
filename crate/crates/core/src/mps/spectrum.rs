use crate::error::Result;
use crate::mps::contract::{left_block, right_block, to_dense};
use crate::mps::{BondSpectrum, CanonicalForm, MatrixProductState};
use crate::schmidt::{entropy, schmidt_decompose};
use crate::tensor::{svd, CMatrix};

/// Schmidt coefficients across bond `cut`.
///
/// Stored weights are returned directly for Vidal chains and the center of a
/// mixed chain. For other cuts of a tagged chain, the isometric side is
/// dropped and only the other block is decomposed. `Unknown` chains go through
/// a dense round trip.
pub fn bond_spectrum(m: &MatrixProductState, cut: usize, rank_tol: f64) -> Result<BondSpectrum> {
    m.check_cut(cut)?;
    let stored = m.bond(cut)?.cloned();
    match (m.form(), stored) {
        (CanonicalForm::Vidal, Some(b)) => Ok(b),
        (CanonicalForm::Mixed { center }, Some(b)) if center == cut => Ok(b),
        (CanonicalForm::Mixed { center }, _) if cut < center => singular_values(&right_block(m, cut), rank_tol),
        (CanonicalForm::Mixed { .. }, _) => singular_values(&left_block(m, cut), rank_tol),
        (CanonicalForm::Left, _) => singular_values(&right_block(m, cut), rank_tol),
        (CanonicalForm::Right, _) => singular_values(&left_block(m, cut), rank_tol),
        _ => {
            let dense = to_dense(m)?;
            BondSpectrum::new(schmidt_decompose(&dense, cut, rank_tol)?.coefficients)
        }
    }
}

/// Von Neumann entropy (nats) across bond `cut`.
pub fn entanglement_entropy(m: &MatrixProductState, cut: usize, rank_tol: f64) -> Result<f64> {
    entropy(bond_spectrum(m, cut, rank_tol)?.values())
}

fn singular_values(block: &CMatrix, rank_tol: f64) -> Result<BondSpectrum> {
    BondSpectrum::new(svd(block, rank_tol)?.s)
}
