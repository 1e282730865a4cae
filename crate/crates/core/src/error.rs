use thiserror::Error;

#[derive(Debug, Error)]
pub enum DunklError {
    #[error("invalid root system: {0}")]
    InvalidRootSystem(String),
    #[error("invalid multiplicity: {0}")]
    InvalidMultiplicity(String),
    #[error("group closure exceeded the size cap of {cap} elements")]
    GroupTooLarge { cap: usize },
    #[error("exact division left a nonzero remainder: {0}")]
    NonzeroRemainder(String),
    #[error("singular linear system at degree {degree}")]
    SingularSystem { degree: usize },
    #[error("requested degree {requested} exceeds the built degree {built}")]
    DegreeTooHigh { requested: usize, built: usize },
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("numerical method did not converge: {0}")]
    NotConverged(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl DunklError {
    /// Errors that signal an arithmetic or internal invariant failure rather
    /// than bad user input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            DunklError::NonzeroRemainder(_) | DunklError::SingularSystem { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, DunklError>;
