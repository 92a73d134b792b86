use thiserror::Error;

/// Errors produced by the simulation library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("basis mismatch: expected (L={expected_sites}, N={expected_magnons}), got (L={sites}, N={magnons})")]
    BasisMismatch {
        expected_sites: usize,
        expected_magnons: usize,
        sites: usize,
        magnons: usize,
    },

    #[error("matrix is not Hermitian: max |M - M^dagger| = {0:e}")]
    NotHermitian(f64),

    #[error("matrix is not unitary: max |U^dagger U - I| = {0:e}")]
    NotUnitary(f64),

    #[error("zero vector has no inverse participation ratio")]
    ZeroVector,

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
