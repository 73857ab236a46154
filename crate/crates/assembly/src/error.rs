use graded_core::GradedError;
use thiserror::Error;
use tr_kernel::TrError;

#[derive(Debug, Error)]
pub enum AssemblyError {
    /// Malformed parameters.
    #[error("invalid input: {0}")]
    Input(String),
    /// Parameters outside the range where the identification holds.
    #[error("out of range: {0}")]
    OutOfRange(String),
    /// A computed table contradicts a structural fact it relies on.
    #[error("inconsistent: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Tr(#[from] TrError),
    #[error(transparent)]
    Graded(#[from] GradedError),
}
