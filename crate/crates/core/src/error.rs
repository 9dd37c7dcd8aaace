use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not unimodular")]
    NotUnimodular,
    #[error("gram matrix is not symmetric")]
    NotSymmetric,
    #[error("lattice is degenerate")]
    Degenerate,
    #[error("not an isometry: {0}")]
    NotIsometry(String),
    #[error("not an involution")]
    NotInvolution,
    #[error("scale factor must be nonzero")]
    ZeroScale,
    #[error("glue vector {index} rejected: {reason}")]
    BadGlue { index: usize, reason: String },
    #[error("non-integral value: {0}")]
    NonIntegral(String),
    #[error("unknown name: {0}")]
    UnknownName(String),
    #[error("unresolved pairing: {0}")]
    Unresolved(String),
    #[error("inconsistent system: {0}")]
    Inconsistent(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
