use graded_core::Bidegree;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TrError {
    #[error("invalid input: {0}")]
    Input(String),
    /// A family element could not be completed to a kernel element, or the
    /// oracle found data contradicting the closed forms it relies on.
    #[error("inconsistency at {at}: {detail}")]
    Inconsistent { at: Bidegree, detail: String },
    #[error(transparent)]
    Engine(#[from] nygaard_engine::EngineError),
    #[error(transparent)]
    ClosedForm(#[from] closed_forms::ClosedFormError),
}
