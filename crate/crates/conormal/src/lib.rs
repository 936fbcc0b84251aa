//! Conormal homology of compact manifolds with embedded corners, computed
//! exactly over the integers from a purely combinatorial description of the
//! face poset.
//!
//! The input is a [`complex::FaceComplex`]: labelled boundary hyperfaces plus
//! faces carrying index tuples and parent maps. From that the crate builds the
//! conormal chain complex with its signed differentials, computes Z-graded and
//! periodic (Z/2-graded) homology via Smith normal form, checks the long exact
//! sequence of the codimension filtration, verifies Künneth formulas for
//! products, and derives the K-theory groups of the algebra of b-compact
//! operators together with Fredholm-perturbation obstruction flags.
//!
//! All linear algebra is exact (arbitrary-precision integers); there is no
//! floating point anywhere. Outputs are deterministic: face bases are ordered
//! canonically and identical inputs produce byte-identical reports.

pub mod builders;
pub mod chains;
pub mod complex;
pub mod doc;
pub mod homology;
pub mod linalg;
pub mod minors;
pub mod products;
pub mod report;
pub mod selftest;

pub use complex::{Face, FaceComplex, FaceId, Label, ValidationReport};
pub use linalg::{AbelianGroup, IntegerMatrix, SmithDecomposition};

/// Errors produced by parsing, construction and the few operations with
/// genuine preconditions. Validation findings are data
/// ([`complex::ValidationReport`]), not errors.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A document or face table cannot represent a face complex at all
    /// (duplicate ids, dangling parent references, malformed tuples).
    #[error("structural error: {0}")]
    Structure(String),

    /// An operation was called with arguments outside its contract.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// Unknown builder name or parameter out of range.
    #[error("builder error: {0}")]
    Builder(String),

    /// A pair of matrices handed to homology machinery does not form a
    /// two-step complex.
    #[error("not a chain complex: {0}")]
    NotAComplex(String),

    /// An operation requires a complex that passes validation.
    #[error("complex failed validation: {0}")]
    Invalid(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
