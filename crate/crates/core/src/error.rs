use thiserror::Error;

use crate::kernel::Scalar;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("scalar field mismatch: {0}")]
    ModeMismatch(String),

    #[error("{value} is not an element of the value group")]
    GammaViolation { value: Box<Scalar> },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("cone {index} is not Γ-admissible: contains the line spanned by {certificate}")]
    NotAdmissible { index: usize, certificate: String },

    #[error("invalid fan: cones {0} and {1} do not meet in a common face")]
    InvalidFan(usize, usize),

    #[error("point lies outside the cone")]
    OutsideCone,

    #[error("not a vertex of the polyhedron")]
    NotAVertex,

    #[error("not a face: {0}")]
    NotAFace(String),

    #[error("cone is not pointed: {0}")]
    NotPointed(String),

    #[error("vertex {vertex} of the level-1 slice is not in N_Γ")]
    NotFiniteType { vertex: String },

    #[error("fan extension failed; conflicting cone pairs: {conflicts:?}")]
    ExtensionFailure { conflicts: Vec<(usize, usize)> },

    #[error("integer overflow while converting {0}")]
    Overflow(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
