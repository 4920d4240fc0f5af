use thiserror::Error;

/// Errors raised by the geometry and signature routines.
///
/// `InvalidInput` covers malformed data (ragged vectors, zero rays, bad
/// generators); every other variant is a violated precondition on otherwise
/// well-formed input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("lattice containment failed: {0}")]
    Containment(String),

    #[error("pairing of {vector:?} with the lattice is identically zero")]
    DegeneratePairing { vector: Vec<i64> },

    #[error("cone is not strongly convex (contains a line)")]
    NotStronglyConvex,

    #[error(
        "cone spans a rank {span_rank} subspace of rank {ambient_rank}; split torus factors first"
    )]
    NotFullDimensional {
        span_rank: usize,
        ambient_rank: usize,
    },

    #[error("polyhedron is unbounded along recession ray {ray:?}")]
    Unbounded { ray: Vec<i64> },

    #[error("divisor coefficient a_{index} = {value} is negative")]
    NotEffective { index: usize, value: String },

    #[error("value out of range: {0}")]
    Range(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("integer overflow converting {0} to a machine integer")]
    Overflow(String),

    #[error(
        "reflection check failed: direct volume {direct} differs from reflected volume {reflected}"
    )]
    ReflectionMismatch { direct: String, reflected: String },
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    /// Whether the error is a malformed-input error as opposed to a
    /// precondition failure.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::InvalidInput(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
