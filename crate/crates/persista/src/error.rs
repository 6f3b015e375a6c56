//! The crate-wide error type.
//!
//! Every fallible operation in the crate reports one of these variants; the
//! variant names are part of the public contract (tests match on them).

use thiserror::Error;

/// Errors raised by construction, validation, parsing, and verification.
#[derive(Clone, Debug, Error, PartialEq)]
pub enum Error {
    /// A face is born after one of its cofaces, so no filtration order exists.
    #[error(
        "monotonicity violated: face {face} (birth {face_birth}) is born after \
         its coface {coface} (birth {coface_birth})"
    )]
    MonotonicityError {
        face: String,
        coface: String,
        face_birth: f64,
        coface_birth: f64,
    },

    /// Inversion of zero in a prime field.
    #[error("division by zero in F_{p}")]
    DivisionByZero { p: u64 },

    /// Checked integer arithmetic left the representable range.
    #[error("integer overflow in {context}")]
    OverflowError { context: String },

    /// A matrix does not have the shape the operation requires.
    #[error("shape error: {0}")]
    ShapeError(String),

    /// The claimed subcomplex contains simplices missing from the ambient complex.
    #[error("not a subcomplex: {0}")]
    NotSubcomplexError(String),

    /// The two pieces of a claimed simplicial cover do not union to the whole complex.
    #[error("cover error: {0}")]
    CoverError(String),

    /// The index criterion for null-homology needs a connected complex.
    #[error("disconnected complex: {0}")]
    DisconnectedError(String),

    /// Two barcodes that are provably equal came out different; this signals
    /// an implementation bug, never bad input.
    #[error("duality violation: {0}")]
    DualityViolation(String),

    /// The rank-invariant oracle refused an input above its configured cap.
    #[error("oracle cap exceeded: filtration has {cells} cells, cap is {cap}")]
    OracleCapExceeded { cells: usize, cap: usize },

    /// A construction would exceed a configured size cap.
    #[error("size error: {0}")]
    SizeError(String),

    /// Input text does not match the grammar.
    #[error("parse error at line {line}: {msg}")]
    ParseError { line: usize, msg: String },

    /// Structurally well-formed input violates a semantic invariant.
    #[error("validation error: {0}")]
    ValidationError(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
