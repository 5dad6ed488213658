//! Graph machinery for lower bounds on the edge Folkman number F_e(3,3;4):
//! simple graphs on at most 62 vertices, graph6 I/O, exact clique,
//! independence and chromatic numbers, canonical labeling, (3,3) arrowing
//! deciders and the maximal K4-free extension search.

pub mod arrowing;
pub mod canon;
pub mod error;
pub mod extender;
pub mod graph;
pub mod graph6;
pub mod invariants;

pub use error::{Error, Result};
pub use graph::{Edge, Graph, VertexSet, MAX_VERTICES};
