use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    /// An object failed structural validation (homogeneity, d^2 = 0, commuting squares, ...).
    #[error("validation failed at {location}: {reason}")]
    Validation { location: String, reason: String },

    #[error("ambient module mismatch: {0}")]
    AmbientMismatch(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A bounded search ran out of room. `stage` names the search, `detail` the last obstruction.
    #[error("search cap exhausted in {stage}: {detail}")]
    CapExhausted { stage: String, detail: String },
}

impl Error {
    pub(crate) fn validation(location: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Validation { location: location.into(), reason: reason.into() }
    }

    pub(crate) fn cap(stage: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::CapExhausted { stage: stage.into(), detail: detail.into() }
    }

    pub fn is_cap_exhausted(&self) -> bool {
        matches!(self, Error::CapExhausted { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
