use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("matrix is not symplectic for the ambient form")]
    NotSymplectic,

    #[error("subspace is not isotropic")]
    NotIsotropic,

    #[error("sampling exhausted after {0} attempts")]
    SamplingExhausted(usize),

    #[error("complex structure is incompatible: {0}")]
    IncompatibleJ(String),

    #[error("cubic form is not in the variety C(sp(V)): {0}")]
    NotInVariety(String),

    #[error("cubic form is not constant (potential degree {0} > 3)")]
    NonConstantCubic(usize),

    #[error("singular matrix")]
    Singular,

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }

    pub(crate) fn check_dim(expected: usize, got: usize) -> Result<(), Error> {
        if expected == got {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected, got })
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
