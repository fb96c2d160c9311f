use thiserror::Error;

/// Errors surfaced by library operations. Validation findings are *data*
/// (reports), not errors; these are the genuinely exceptional paths.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("integrity failure: {0}")]
    Integrity(String),

    #[error("degree {0} out of range")]
    DegreeOutOfRange(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
