use thiserror::Error;

/// Errors produced by tropml operations.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("point contains a non-finite entry at index {index}")]
    NonFinite { index: usize },
    #[error("points need at least 2 coordinates, got {len}")]
    TooShort { len: usize },
    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedRows {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("input is empty")]
    Empty,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("bad dimension: {0}")]
    BadDimension(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("start point lies outside the ball (distance {distance})")]
    StartOutsideBall { distance: f64 },
    #[error("start point lies outside the polytope (distance {distance})")]
    StartOutsideHull { distance: f64 },
    #[error("no non-degenerate direction found after {retries} retries")]
    DegenerateDirection { retries: usize },
    #[error("solver failure: {0}")]
    SolverFailure(String),
    #[error("both classes must be present")]
    SingleClass,
    #[error("need at least {needed} points, got {found}")]
    TooFewPoints { needed: usize, found: usize },
    #[error("need at least 2 leaves, got {found}")]
    TooFewLeaves { found: usize },
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("duplicate leaf label {0:?}")]
    DuplicateLabel(String),
    #[error("vector is not ultrametric (violation {violation})")]
    NotUltrametric { violation: f64 },
    #[error("model format error: {0}")]
    Model(String),
}

/// Coarse classification used to map errors onto process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Parse,
    Dimension,
    Solver,
    Geometry,
    Other,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Parse { .. } | Error::DuplicateLabel(_) | Error::NonFinite { .. } | Error::Model(_) => {
                ErrorKind::Parse
            }
            Error::TooShort { .. }
            | Error::RaggedRows { .. }
            | Error::DimensionMismatch { .. }
            | Error::NotSquare { .. }
            | Error::BadDimension(_) => ErrorKind::Dimension,
            Error::SolverFailure(_) => ErrorKind::Solver,
            Error::StartOutsideBall { .. }
            | Error::StartOutsideHull { .. }
            | Error::DegenerateDirection { .. }
            | Error::NotUltrametric { .. } => ErrorKind::Geometry,
            Error::Empty
            | Error::InvalidParameter(_)
            | Error::SingleClass
            | Error::TooFewPoints { .. }
            | Error::TooFewLeaves { .. } => ErrorKind::Other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
