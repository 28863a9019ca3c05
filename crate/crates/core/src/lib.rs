//! Finite, executable models of selection principles for covers: cover
//! classification under finite budgets, binary-array families and their
//! diagonalizers, f-sequence families, and a derivation engine that rebuilds
//! the implication table between the principles.

pub mod arrays;
pub mod cli;
pub mod covers;
pub mod diag;
pub mod diagram;
pub mod error;
pub mod fseq;
pub mod search;

pub use error::{Error, Result};
