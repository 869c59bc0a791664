use thiserror::Error;

/// Every failure the workbench can report.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("presentation mismatch: {0}")]
    PresentationMismatch(String),
    #[error("algebra is not finite-dimensional within the truncation (degree {degree} is still nonzero)")]
    NotFinite { degree: usize },
    #[error("unsupported algebra: {0}")]
    UnsupportedAlgebra(String),
    #[error("unsupported input: {0}")]
    UnsupportedInput(String),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("not a point of the point scheme: piece in degree {degree} has dimension {dim}, expected 1")]
    NotAPoint { degree: usize, dim: usize },
    #[error("no automorphism: {0}")]
    NoAutomorphism(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
