use graded_core::Bidegree;
use thiserror::Error;

/// Errors raised while building or running a page.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("stage {requested} requested but the page has completed {completed} stages")]
    StageOrder { requested: String, completed: usize },
    #[error("page too large: about {estimate} monomials exceed the limit {limit}")]
    Resource { estimate: u64, limit: u64 },
    #[error("inconsistent page at {at}: {detail}")]
    Inconsistent { at: Bidegree, detail: String },
}
