use thiserror::Error;

/// Errors raised by the graded layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradedError {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("monomials live at different levels or twists: {0} vs {1}")]
    Mismatch(String, String),
    #[error("duplicate generator label {0:?}")]
    DuplicateLabel(String),
    #[error("invalid window [{lo}, {hi}]")]
    InvalidWindow { lo: i64, hi: i64 },
    #[error("torsion bound violated: x^{bound} does not kill the torsion in homological degree {degree}")]
    TorsionBound { bound: u32, degree: i64 },
    #[error("malformed complex: {0}")]
    MalformedComplex(String),
    #[error("table parse error: {0}")]
    Parse(String),
}
