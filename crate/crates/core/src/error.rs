use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: expected {expected} entries, got {actual}")]
    ShapeMismatch { expected: usize, actual: usize },

    #[error("tensor shape must have at least one dimension, each at least 1")]
    EmptyShape,

    #[error("cut {cut} out of range 1..={max}")]
    CutOutOfRange { cut: usize, max: usize },

    #[error("keep {keep} exceeds the {len} available singular values")]
    KeepOutOfRange { keep: usize, len: usize },

    #[error("SVD did not converge on a {rows}x{cols} matrix")]
    ConvergenceFailure { rows: usize, cols: usize },

    #[error("state has zero norm")]
    ZeroState,

    #[error("mixed-canonical center {center} out of range 1..={max}")]
    CenterOutOfRange { center: usize, max: usize },

    #[error("bond dimensions do not chain at bond {bond}: {left} vs {right}")]
    DimChainBroken { bond: usize, left: usize, right: usize },

    #[error("expected form {expected}, found {found}")]
    FormMismatch { expected: String, found: String },

    #[error("truncation policy sets neither max_bond nor weight_tol")]
    PolicyEmpty,

    #[error("invalid truncation policy: {0}")]
    InvalidPolicy(String),

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("vector length {actual} does not match expected {expected}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("bond spectrum must be positive and nonincreasing")]
    InvalidSpectrum,

    #[error("Hermite degree {0} exceeds the supported maximum")]
    DegreeTooLarge(usize),

    #[error("{points} quadrature nodes cannot integrate degree {degree} exactly")]
    InsufficientNodes { points: usize, degree: usize },

    #[error("invalid oscillator parameters: {0}")]
    InvalidParams(String),
}

pub type Result<T> = std::result::Result<T, Error>;
