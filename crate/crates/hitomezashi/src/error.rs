use thiserror::Error;

/// Errors produced by pattern, strand, Dyck, slicing, and census operations.
#[derive(Debug, Error)]
pub enum Error {
    /// A stitch whose midpoint parity does not match its orientation.
    #[error("invalid stitch: {0}")]
    InvalidStitch(String),

    /// A coordinate outside the pattern's grid.
    #[error("out of bounds: {0}")]
    OutOfBounds(String),

    /// Malformed textual input (pattern JSON, Dyck strings, ...).
    #[error("parse error: {0}")]
    Parse(String),

    /// An argument that violates an operation's precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A structural law that is supposed to hold unconditionally failed.
    /// Seeing this error means a bug, not a bad input.
    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    /// An exhaustive enumeration larger than the configured budget.
    #[error("enumeration budget exceeded: {0}")]
    Budget(String),

    /// Slice position or flanking labels unsuitable for slicing.
    #[error("slice precondition failed: {0}")]
    SlicePrecondition(String),

    /// A cross-section query at a position the loop does not populate.
    #[error("empty cross-section: {0}")]
    EmptyCrossSection(String),

    /// An intertwining class that mixes open strands into a loops-only law.
    #[error("inapplicable class: {0}")]
    InapplicableClass(String),

    /// A lookup (loop id, dent longitude, ...) with no result.
    #[error("not found: {0}")]
    NotFound(String),
}

pub type Result<T> = std::result::Result<T, Error>;
