//! Exact enumeration of words avoiding forbidden consecutive factors.
//!
//! The crate computes, over a finite alphabet and a finite set `F` of
//! forbidden words:
//!
//! * the words avoiding `F` ([`avoidance`]), through a pattern-matching
//!   automaton;
//! * clusters and cluster polynomials ([`clusters`]) and the cluster
//!   generating function, and checks it against direct enumeration of
//!   `sum t^{occurrences(w)} w`;
//! * the reciprocal `M` of the avoiding series ([`reciprocal`]), whose
//!   coefficients are all `-1`, `0` or `1`, along three independent routes;
//! * Möbius functions of lattices of unions of intervals ([`lattice`]).
//!
//! Series live in [`series`]: truncated noncommutative power series with
//! exact integer or `Z[t]` coefficients.

pub mod automaton;
pub mod avoidance;
pub mod cli;
pub mod clusters;
pub mod error;
pub mod lattice;
pub mod poly;
pub mod problem;
pub mod reciprocal;
pub mod report;
pub mod series;
pub mod sweep;
pub mod words;

pub use error::{Error, Result};
pub use poly::IntPoly;
pub use series::{NcPolySeries, NcSeries};
pub use words::{Alphabet, ForbiddenSet, Word};
