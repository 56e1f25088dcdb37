use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("polynomial rings differ: {left} vs {right} variables")]
    VariableCountMismatch { left: usize, right: usize },

    #[error("exponent matrix is singular")]
    SingularMatrix,

    #[error("invalid exponent matrix: {0}")]
    InvalidMatrix(String),

    #[error("out of supported class: {0}")]
    UnsupportedClass(String),

    #[error("invalid rank {rank} for type {kind}")]
    InvalidRank { kind: String, rank: usize },

    #[error("generator set would be infinite: {0}")]
    InfiniteGenerators(String),

    #[error("unsupported grading: {0}")]
    UnsupportedGrading(String),

    #[error("not a matrix factorization: {0}")]
    NotFactorization(String),

    #[error("matrix factorization is not homogeneous: {0}")]
    NotHomogeneous(String),

    #[error("matrix factorizations are over different potentials or gradings")]
    MismatchedPotential,

    #[error("invalid gamma choice: {0}")]
    InvalidGamma(String),

    #[error("index {index} out of range (size {size})")]
    OutOfRange { index: usize, size: usize },

    #[error("group is not contained in G_max: {0}")]
    NotInGmax(String),

    #[error("group does not contain J")]
    MissingJ,

    #[error("parse error: {0}")]
    Parse(String),
}
