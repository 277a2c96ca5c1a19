//! Exact arithmetic for polyhedral divisors on curves.
//!
//! The crate computes with the combinatorial data attached to a normal
//! variety carrying a complexity-one torus action: a strictly convex tail
//! cone in a lattice, and finitely many tailed polyhedral coefficients
//! indexed by points of a curve.  On top of that it provides the orders on
//! equivariant divisorial valuations (combinatorial, hypercombinatorial,
//! pointwise), the Nash/essential/terminal/minimal valuation sets, and
//! star-subdivision refinements that certify a valuation as non-essential.
//!
//! Everything is exact: integers are arbitrary precision, rationals are
//! reduced fractions, and every geometric predicate is decided by integer
//! linear algebra.  There are no floats anywhere.

pub mod error;
pub mod lattice;
pub mod polyhedra;
pub mod pdivisor;
pub mod hyperorder;
pub mod valsets;
pub mod resolve;
pub mod examples;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
