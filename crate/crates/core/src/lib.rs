//! Dense tensors to matrix product states and back.
//!
//! - [`tensor`]: dense row-major tensors, matricization, gauge-fixed thin SVD.
//! - [`schmidt`]: bipartite Schmidt decomposition and entropy.
//! - [`mps`]: site tensors, the four canonical constructions, contraction,
//!   verification, spectra and truncation.
//! - [`oscillator`]: the analytic MPS of a three-oscillator eigenstate.
//!
//! Heavy loops go through rayon when the `parallel` feature is on (default);
//! without it every routine runs sequentially with identical results.

pub mod error;
pub mod mps;
pub mod oscillator;
mod par;
pub mod schmidt;
pub mod tensor;

pub use error::{Error, Result};
pub use mps::{BondSpectrum, CanonicalForm, MatrixProductState, SiteTensor, TruncationPolicy};
pub use schmidt::{schmidt_decompose, SchmidtDecomposition};
pub use tensor::{svd, DenseTensor, SvdResult, C64, DEFAULT_RANK_TOL};

/// Whether this build runs its kernels on the rayon pool.
pub fn is_parallel() -> bool {
    par::is_parallel()
}
