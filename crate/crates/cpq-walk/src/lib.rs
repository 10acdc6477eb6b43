//! Explicit walk-based backtracking simulator: materialized search trees
//! with per-node labels, dense walk operators assembled from per-node
//! reflections, spectral marked-node detection, descent-based finding,
//! effective-resistance weighting, and chunked / depth-bounded variants.

mod chunk;
mod resistance;
mod tree;
mod walk;

pub use chunk::{bounded_depth_search, chunk_spec, chunky_search, path_child_count, ChunkSpec};
pub use resistance::{effective_resistance, effective_resistance_with};
pub use tree::{build_tree, NodeData, NodeId, SearchTree, TreeError, TreeNode};
pub use walk::{
    detect_marked, detect_marked_with, find_marked, find_marked_with, root_projection,
    walk_unitary, walk_unitary_with, AlphaPolicy, Detection, WalkError, DETECT_TOLERANCE,
    MAX_DENSE_NODES,
};
