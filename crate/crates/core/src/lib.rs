//! Pattern posets and their embedding fibrations.
//!
//! The [`poset`] module is a generic finite-poset engine (Möbius function,
//! order complexes, crosscuts, recursive atom orderings). The remaining
//! modules build pattern posets on words and permutations on top of it.

pub mod consecutive;
pub mod embedding;
pub mod error;
pub mod fibration;
pub mod fixtures;
pub mod poset;
pub mod report;
pub mod sweep;
pub mod system;
pub mod topology;
pub mod word;

pub use error::{Error, Result};
pub use poset::{ElementId, FinitePoset, Limits};
