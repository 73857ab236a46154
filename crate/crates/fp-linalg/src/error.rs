use thiserror::Error;

/// Errors raised by the linear-algebra layer.
///
/// All of them indicate malformed input; none can arise from a well-formed
/// computation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("modulus {0} is not prime")]
    NotPrime(u32),
    #[error("dimension mismatch: expected length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("entry ({row}, {col}) lies outside a {rows}x{cols} matrix")]
    OutOfBounds {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("denominator vector {index} does not lie in the span of the numerator")]
    NotContained { index: usize },
}
