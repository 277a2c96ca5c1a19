use thiserror::Error;

/// Errors shared by the whole crate.
///
/// The library prefers erroring loudly over silently picking a convention:
/// zero vectors have no primitive representative, unbounded polyhedra cannot
/// be enumerated, and the Nash set over a genus-zero complete locus is an
/// open problem rather than a computation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("zero has no primitive representative")]
    ZeroVector,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point lies outside the cone")]
    NotInCone,

    #[error("unbounded polyhedron: lattice point enumeration requires a polytope")]
    Unbounded,

    #[error("operation requires a non-empty polyhedron")]
    EmptyPolyhedron,

    #[error("cone is not strictly convex")]
    NotStrictlyConvex,

    #[error("singular locus formula requires positive genus")]
    GenusZeroSingularLocus,

    #[error("Nash/essential/terminal sets over a genus-0 complete locus are an open problem")]
    GenusZeroOpenProblem,

    #[error("divisor is not proper: {0}")]
    NotProper(String),

    #[error("no avoiding resolution exists (valuation is a T-essential candidate)")]
    MinimalValuation,

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}
