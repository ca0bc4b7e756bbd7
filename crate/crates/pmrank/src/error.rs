//! Error type shared across the crate.

use std::fmt;

use crate::field::FieldSpec;

/// Everything that can go wrong in this crate.
#[derive(Debug)]
pub enum Error {
    /// A prime-field modulus failed the primality check.
    NotPrime(u64),
    /// Arithmetic or matrix operation mixed two different fields.
    FieldMismatch {
        left: FieldSpec,
        right: FieldSpec,
    },
    /// Division or inversion of zero.
    DivisionByZero,
    /// Requested an exhaustive enumeration over the rationals.
    NotEnumerable,
    /// Matrix shapes incompatible for the operation.
    ShapeMismatch {
        expected: (usize, usize),
        got: (usize, usize),
    },
    /// A square matrix was required.
    NotSquare {
        rows: usize,
        cols: usize,
    },
    /// A position outside the matrix dimensions.
    OutOfRange {
        pos: (usize, usize),
        rows: usize,
        cols: usize,
    },
    /// A matrix that must be invertible is singular.
    Singular,
    /// A known block of a block partial matrix is singular.
    SingularBlock {
        pos: (usize, usize),
    },
    /// A fill map misses an unknown position.
    IncompleteFill {
        missing: (usize, usize),
    },
    /// A fill map touches a known position.
    OverlapWithKnown {
        pos: (usize, usize),
    },
    /// Restriction target is not a subpattern.
    NotSubpattern {
        pos: (usize, usize),
    },
    /// A matrix claimed to complete a partial matrix disagrees with a
    /// known entry.
    NotACompletion {
        pos: (usize, usize),
    },
    /// Not a permutation of the expected index range.
    BadPermutation(String),
    /// A triangular pattern was required.
    NotTriangular,
    /// A search would exceed its budget.
    BudgetExceeded {
        needed: u128,
        budget: u64,
    },
    /// The pattern is not a (scalar or block) minimal-cycle pattern.
    NotACycle,
    /// A cycle entry is zero where a nonzero one is required.
    ZeroEntry {
        pos: (usize, usize),
    },
    /// The zero-entry analysis was asked for a cycle without zeros.
    NoZeroEntry,
    /// An eigenvalue of the cycle invariant blocks the construction
    /// (0, 1, or a characteristic polynomial that does not split).
    EigenvalueObstruction(String),
    /// A completion construction failed one of its post-assertions.
    ConstructionRankFailure(String),
    /// Text input could not be parsed; 1-based line and column.
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },
    Io(std::io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotPrime(p) => write!(f, "{p} is not prime"),
            Error::FieldMismatch { left, right } => {
                write!(f, "field mismatch: {left} vs {right}")
            }
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::NotEnumerable => {
                write!(f, "the rationals cannot be enumerated; use a prime field")
            }
            Error::ShapeMismatch { expected, got } => write!(
                f,
                "shape mismatch: expected {}x{}, got {}x{}",
                expected.0, expected.1, got.0, got.1
            ),
            Error::NotSquare { rows, cols } => {
                write!(f, "matrix must be square, got {rows}x{cols}")
            }
            Error::OutOfRange { pos, rows, cols } => write!(
                f,
                "position ({}, {}) outside a {rows}x{cols} matrix",
                pos.0, pos.1
            ),
            Error::Singular => write!(f, "matrix is singular"),
            Error::SingularBlock { pos } => {
                write!(f, "known block at ({}, {}) is singular", pos.0, pos.1)
            }
            Error::IncompleteFill { missing } => {
                write!(
                    f,
                    "fill misses unknown position ({}, {})",
                    missing.0, missing.1
                )
            }
            Error::OverlapWithKnown { pos } => {
                write!(f, "fill touches known position ({}, {})", pos.0, pos.1)
            }
            Error::NotSubpattern { pos } => write!(
                f,
                "position ({}, {}) is not known in the source pattern",
                pos.0, pos.1
            ),
            Error::NotACompletion { pos } => write!(
                f,
                "matrix disagrees with the known entry at ({}, {})",
                pos.0, pos.1
            ),
            Error::BadPermutation(msg) => write!(f, "bad permutation: {msg}"),
            Error::NotTriangular => write!(f, "pattern is not triangular"),
            Error::BudgetExceeded { needed, budget } => {
                write!(f, "search needs {needed} steps, budget is {budget}")
            }
            Error::NotACycle => write!(f, "pattern is not a minimal-cycle pattern"),
            Error::ZeroEntry { pos } => {
                write!(f, "known entry at ({}, {}) is zero", pos.0, pos.1)
            }
            Error::NoZeroEntry => write!(f, "cycle has no zero entry"),
            Error::EigenvalueObstruction(msg) => write!(f, "eigenvalue obstruction: {msg}"),
            Error::ConstructionRankFailure(msg) => {
                write!(f, "construction post-assertion failed: {msg}")
            }
            Error::Parse { line, col, msg } => {
                write!(f, "parse error at line {line}, column {col}: {msg}")
            }
            Error::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
