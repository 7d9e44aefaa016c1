pub mod atom_decomp;
pub mod atoms;
pub mod canonizer;
pub mod error;
pub mod graph;
pub mod harness;
pub mod nested;
pub mod ordering;
pub mod treedec;

pub use canonizer::{canon, canonical_sequence, isomorphic, Canon, CanonOptions};
pub use error::{Error, Result};
pub use graph::{ColoredGraph, Connectivity, Vertex};
pub use nested::NestedDecomposition;
pub use treedec::{RootedTreeDecomposition, UnrootedTreeDecomposition};
