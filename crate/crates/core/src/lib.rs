//! Combinatorial tools for ensembles of multipartite CAT states.
//!
//! An ensemble is modelled as a hypergraph whose vertices are parties and whose
//! hyperedges are shared CAT states (EPR pairs for two-member edges). The crate
//! certifies LOCC incomparability through cut capacities, explores the
//! certifiable fragment of the LOCC partial order, and plans transformations in
//! the teleportation-plus-destruction model.

pub mod analysis;
pub mod cli;
pub mod combinatorics;
pub mod error;
pub mod hypergraph;
pub mod order;
pub mod restricted;

pub use error::{Error, ParseError, Result};
pub use hypergraph::{Bipartition, Hyperedge, Hypergraph, Partition, VertexSet};
