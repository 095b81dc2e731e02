use thiserror::Error;

use crate::rational::Rational;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix order {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("diagonal entry ({index}, {index}) is {value}, expected 1")]
    NonUnitDiagonal { index: usize, value: Rational },

    #[error("entry ({row}, {col}) is {value}, expected -1, 0 or 1")]
    NotASign {
        row: usize,
        col: usize,
        value: Rational,
    },

    #[error("entry ({row}, {col}) lies above the diagonal and must be zero")]
    NotLowerTriangular { row: usize, col: usize },

    #[error("column {col} out of range for order {n}")]
    ColumnOutOfRange { col: usize, n: usize },

    #[error("vector length {actual} does not match operator length {expected}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("k = {k} exceeds the cap of {cap}")]
    CapExceeded { k: u32, cap: u32 },

    #[error("invalid rational {0:?}: expected p or p/q with q > 0")]
    ParseRational(String),

    #[error("length must be at least 1")]
    EmptyWord,

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
