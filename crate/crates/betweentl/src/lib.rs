//! Between and threshold temporal logics over finite words.
//!
//! The crate parses temporal and two-variable first-order formulas, evaluates
//! them on finite words, translates guarded temporal formulas down to LTL,
//! decides satisfiability, solves Ehrenfeucht–Fraïssé games and classifies
//! regular languages through their syntactic monoids.

pub mod algebra;
pub mod corpus;
pub mod error;
pub mod factorize;
pub mod games;
pub mod sat;
pub mod semantics;
pub mod syntax;
pub mod translate;

pub use error::{Error, Result};
