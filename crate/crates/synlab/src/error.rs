use thiserror::Error;

/// Failures of a command, with their exit codes.
#[derive(Debug, Error)]
pub enum CliError {
    /// Invalid flags or parameters outside a hypothesis (exit 2).
    #[error("{0}")]
    Input(String),
    /// A verification failed or a computation contradicted itself (exit 3).
    #[error("{0}")]
    Verification(String),
    /// Reading or writing files (exit 1).
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Input(_) => 2,
            Self::Verification(_) => 3,
            Self::Io(_) => 1,
        }
    }
}

impl From<graded_core::GradedError> for CliError {
    fn from(e: graded_core::GradedError) -> Self {
        Self::Input(e.to_string())
    }
}

impl From<nygaard_engine::EngineError> for CliError {
    fn from(e: nygaard_engine::EngineError) -> Self {
        use nygaard_engine::EngineError as E;
        match e {
            E::Inconsistent { .. } => Self::Verification(e.to_string()),
            _ => Self::Input(e.to_string()),
        }
    }
}

impl From<closed_forms::ClosedFormError> for CliError {
    fn from(e: closed_forms::ClosedFormError) -> Self {
        Self::Input(e.to_string())
    }
}

impl From<tr_kernel::TrError> for CliError {
    fn from(e: tr_kernel::TrError) -> Self {
        use tr_kernel::TrError as E;
        match e {
            E::Input(_) | E::ClosedForm(_) => Self::Input(e.to_string()),
            E::Engine(inner) => inner.into(),
            E::Inconsistent { .. } => Self::Verification(e.to_string()),
        }
    }
}

impl From<assembly::AssemblyError> for CliError {
    fn from(e: assembly::AssemblyError) -> Self {
        use assembly::AssemblyError as E;
        match e {
            E::Input(_) | E::OutOfRange(_) | E::Graded(_) => Self::Input(e.to_string()),
            E::Inconsistent(_) => Self::Verification(e.to_string()),
            E::Tr(inner) => inner.into(),
        }
    }
}
