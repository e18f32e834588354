use thiserror::Error;

/// Errors raised across the library.
///
/// Variants follow the failure classes of the pipeline: bad caller input,
/// structural problems in the algebraic data, and numerical checks that
/// did not hold.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A congruence system violated the nondegeneracy condition; the
    /// quotient it was built on was computed wrongly.
    #[error("degenerate twist system: {0}")]
    Degenerate(String),

    /// Data that must be consistent by construction was not.
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error("fusion rules are not integral: {0}")]
    FusionIntegrality(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("malformed fixed-point bundle: {0}")]
    MalformedBundle(String),

    #[error("twist table inconsistency: {0}")]
    TwistTable(String),

    #[error("invalid extension: {0}")]
    InvalidExtension(String),

    #[error("incomplete input: {0}")]
    IncompleteInput(String),

    #[error("resolution inconsistency: {0}")]
    Resolution(String),

    #[error("convention inconsistency: {0}")]
    Convention(String),

    #[error("schema violation: {0}")]
    Schema(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
