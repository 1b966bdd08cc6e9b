//! Construction and verification of almost Steiner systems.
//!
//! An almost Steiner system with parameters `t`, `k`, `n` is a `k`-uniform
//! hypergraph on `n` vertices in which every `t`-set of vertices is covered
//! by one or two edges. This crate builds such designs in two phases: a
//! randomized packing phase that covers most `t`-sets at most once, followed
//! by an augmentation phase that covers the remaining `t`-sets with fresh
//! edges whose pairwise intersections stay below `t`. An independent
//! verifier checks the result.

pub mod augmenter;
pub mod combinatorics;
pub mod error;
pub mod hypergraph;
pub mod io;
pub mod packer;
pub mod verifier;

pub use error::Error;
pub use hypergraph::{coverage_map, leave_hypergraph, CoverageMap, Design, LeaveHypergraph, VertexSet};
