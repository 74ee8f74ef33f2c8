//! Exact-arithmetic toolkit for comparing two Proj-style constructions of a
//! toric variety from a rational fan.
//!
//! Given a fan `Δ` in a lattice `N ≅ ℤⁿ`, the library computes the lattice
//! `SF(Δ)` of integral support functions, the divisor class group
//! `Pic(Δ) = SF(Δ)/Div(M)`, and a `Pic(Δ)`-graded polynomial model with one
//! variable per ray.  On top of that it builds the two chart atlases — the
//! toric one (one chart per cone of `Δ`) and the multihomogeneous one (one
//! chart per relevant square-free monomial) — and decides whether the open
//! embedding of the first space into the second is an isomorphism.  When it
//! is not, explicit witness ideals are produced for the missing charts.
//!
//! All arithmetic is exact: arbitrary-precision integers and rationals
//! throughout.  Floating point is banned crate-wide.

#![deny(clippy::float_arithmetic)]
#![deny(clippy::lossy_float_literal)]
#![deny(unsafe_code)]

pub mod cli;
pub mod coxring;
pub mod error;
pub mod fan;
pub mod intlin;
pub mod projcmp;
pub mod suppfun;

pub use error::{Error, Result};
