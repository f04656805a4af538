//! Consecutive pattern avoidance in permutations via the cluster method.

pub mod cluster;
pub mod collection;
pub mod equivalence;
pub mod error;
pub mod graph;
pub mod overlap;
pub mod perm;
pub mod series;
mod poset;

pub use collection::{reduce_collection, PatternCollection};
pub use error::{Error, Result};
pub use graph::{build_graph, OverlapGraph};
pub use perm::{Permutation, Word};
pub mod catalog;
pub mod monotone;
pub mod cli;
