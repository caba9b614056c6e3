//! Exact symbolic constructions on ultimately periodic infinite words.
//!
//! The crate decides the equivalence relations `E0`, `E1`, `E2`, `E3`,
//! tail equivalence and its permutation twist on exactly representable
//! inputs, builds and verifies E0- and E2-trees, evaluates the continuous
//! maps and reductions between these relations, and emits self-contained
//! certificates for the counterexample constructions.

pub mod cert;
pub mod eqrel;
pub mod error;
pub mod gen;
pub mod maps;
pub mod rational;
pub mod replay;
pub mod trees;
pub mod witnesses;
pub mod word;

pub use error::{Error, Result};
pub use word::{FiniteWord, Grid, OmegaSeq, UPWord};
