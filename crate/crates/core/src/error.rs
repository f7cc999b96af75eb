use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero vector at position {0}")]
    ZeroVector(usize),
    #[error("list does not span dimension {0}")]
    NotSpanning(usize),
    #[error("vector at position {position} has {found} coordinates, expected {expected}")]
    DimensionMismatch { position: usize, expected: usize, found: usize },
    #[error("variable bank mismatch: {0}")]
    BankMismatch(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("series has no invertible leading term")]
    NotInvertible,
    #[error("truncation order {order} is too small, at least {needed} is required")]
    TruncationTooSmall { order: u32, needed: u32 },
    #[error("indices {0:?} do not form a basis")]
    NotABasis(Vec<usize>),
    #[error("{0}")]
    InvalidArgument(String),
    #[error("basis is not adapted to the nested family")]
    NotAdapted,
    #[error("nested family has {found} members, a maximal one needs {expected}")]
    NotMaximal { expected: usize, found: usize },
    #[error("point lies outside the cone C(X)")]
    OutsideCone,
    #[error("the cone C(X) contains a line")]
    NotPointed,
    #[error("base point {0} lies on a wall; choose a different point")]
    OnWall(String),
    #[error("polynomial is not annihilated by the cocircuit operators")]
    NotInDx,
    #[error("list is not unimodular")]
    NotUnimodular,
    #[error("invalid torus point: {0}")]
    InvalidTorusPoint(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
