use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosedFormError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("parameters violate the family constraints: {0}")]
    Constraint(String),
}
