//! Braid groups, free-group dynamics and configuration maps.

// `!(a < b)` is deliberate: NaN must fail these tests.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod braid;
pub mod confmaps;
pub mod exec;
pub mod f2dyn;
pub mod modgroup;
pub mod monodromy;
pub mod report;
pub mod words;

pub use exec::Exec;
pub use words::{Letter, ReducedWord, WordError};
