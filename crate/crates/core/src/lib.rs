//! Fixed-parameter solver for Subset Directed Feedback Vertex Set.
//!
//! Given a digraph `G`, a set `S` of arcs and a budget `k`, find at most `k`
//! deletable vertices whose removal leaves no closed walk through an arc of
//! `S`. The search combines iterative compression, randomized (or
//! exhaustive, or splitter-based) sampling of important separators, the
//! torso reduction, and branching on critical vertices and pushed
//! separators. Every YES answer is certified before it is returned.

pub mod format;
pub mod generate;
pub mod graph;
pub mod oracle;
pub mod sampling;
pub mod separators;
pub mod solver;
pub mod torso;

pub use graph::{Arc, ArcSet, Digraph, GraphError, SccDecomposition, VertexId, VertexSet};
