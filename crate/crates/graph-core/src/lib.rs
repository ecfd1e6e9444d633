//! Port-numbered undirected graphs with a degree bound, multisets over a
//! finite output alphabet, node and edge configurations, and the two derived
//! constructions used by the reductions (line graphs and clone graphs).
//!
//! Node handles are plain indices. They exist for the simulator's benefit;
//! the algorithms only ever see ports, degrees and the degree bound.

mod config;
mod derived;
mod edgelist;
mod error;
pub mod generate;
mod graph;
mod multiset;

pub use config::{Configuration, Kind};
pub use derived::{clone_graph, line_graph, CloneMap, LineMap};
pub use edgelist::{parse_edge_list, read_edge_list};
pub use error::GraphError;
pub use graph::{distance, distances_from, Distance, EdgeId, Graph, NodeId};
pub use multiset::{Label, Multiset, MultisetSpace};
