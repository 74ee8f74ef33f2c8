//! Crate-wide error type.
//!
//! Two failure classes matter to callers: hard errors (bad input, I/O,
//! internal misuse) and *assumption violations* — structurally valid fans
//! that fall outside the hypotheses a construction needs (non-spanning
//! support, non-simplicial cones, torsion in the class group).  The CLI
//! maps the former to exit code 1 and the latter to exit code 2.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// The fan data violates one or more fan axioms; every violation is listed.
    #[error("invalid fan: {}", .0.join("; "))]
    InvalidFan(Vec<String>),

    /// A construction's hypotheses are not met by this (otherwise valid) fan.
    #[error("assumption violated: {}", .0.join("; "))]
    AssumptionViolated(Vec<String>),

    /// Unknown builtin fan name.
    #[error("unknown builtin fan `{0}`")]
    UnknownBuiltin(String),

    /// Weighted-projective weights that do not define a fan.
    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    /// Dimension or shape mismatch in a linear-algebra operation.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A vector that was required to lie in the span of a lattice does not.
    #[error("vector lies outside the rational span of the lattice")]
    OutsideSpan,

    /// A cone reference that is not a cone of the fan (or vice versa).
    #[error("cone {0:?} is not a cone of the fan")]
    ConeNotInFan(Vec<usize>),

    /// Witness-ideal request for a cone the fan already contains.
    #[error("cone {0:?} is a cone of the fan; no witness ideal exists")]
    ConeInFan(Vec<usize>),

    /// Star subdivision preconditions (smooth 2-dimensional cone).
    #[error("star subdivision requires a smooth 2-dimensional cone of a 2-dimensional fan: {0}")]
    SubdivisionUnsupported(String),

    /// A monomial that is not relevant where relevance is required.
    #[error("monomial is not relevant: {0}")]
    NotRelevant(String),

    /// Requested support function does not exist.
    #[error("no support function with the required zero/positive pattern exists for cone {0:?}")]
    NoSupportFunction(Vec<usize>),

    /// CLI-level input problems (file I/O, JSON syntax, flag values).
    #[error("{0}")]
    Input(String),

    /// Internal consistency failure; indicates a bug, never user error.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors the CLI reports with exit code 2.
    pub fn is_assumption_violation(&self) -> bool {
        matches!(self, Error::AssumptionViolated(_))
    }
}
