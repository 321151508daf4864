use thiserror::Error;

use crate::scalars::Backend;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("backend mismatch: {0:?} vs {1:?}")]
    BackendMismatch(Backend, Backend),

    #[error("division by zero")]
    DivisionByZero,

    #[error("normalization requires float backend: {0} is not a square in its field")]
    NotASquare(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("zero entry at (row {row}, col {col})")]
    ZeroEntry { row: usize, col: usize },

    #[error("point on a blown-down hyperplane: coordinate {index} is zero")]
    ZeroCoordinate { index: usize },

    #[error("the zero vector is not a projective point")]
    ZeroVector,

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("{0} requires a float backend; use rank instead")]
    RequiresFloat(&'static str),

    #[error("leading coefficient is zero")]
    ZeroLeadingCoefficient,

    #[error("parameter {0} coincides with a node of the curve")]
    ParameterAtNode(String),

    #[error("repeated roots in the section polynomial (degenerate curve position)")]
    RepeatedRoot,

    #[error("gave up after {0} consecutive rejected samples")]
    TooManyRejections(usize),

    #[error("trial {trial}: {source}")]
    Trial {
        trial: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
