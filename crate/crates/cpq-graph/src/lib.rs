//! Classical graph kernels behind matching-based constraint filtering:
//! bipartite variable-value graph construction, Hopcroft-Karp maximum
//! matching with cover-based maximality verification, strongly connected
//! components, and the edge-removal pipeline that identifies edges
//! belonging to no maximum matching.

mod matching;
mod remove_edges;
mod scc;
mod value_graph;

pub use matching::{
    max_matching_hk, max_matching_hk_with_phases, verify_matching_maximum, Matching,
};
pub use remove_edges::{
    direct_graph, find_simple_paths, identify_edges, remove_edges_classical, DirectedValueGraph,
};
pub use scc::{tarjan_scc, SccMap};
pub use value_graph::{build_value_graph, GraphError, VariableValueGraph};
