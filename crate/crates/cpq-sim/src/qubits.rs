use crate::model::ceil_log2;

/// Sizing parameters for one search-tree node held in quantum memory:
/// the branch-count register, the branching history, the per-variable
/// active domains, and the per-level removed-edge sets.
#[derive(Clone, Debug)]
pub struct NodeQubitParams {
    /// Upper bound on tree depth (history length).
    pub depth_bound: u64,
    /// Upper bound on the number of children of any node.
    pub branch_bound: u64,
    /// Original domain size of each variable.
    pub domain_sizes: Vec<u64>,
    /// Number of distinct values across all domains.
    pub value_count: u64,
    /// Upper bound on removable edges per level (the edge count).
    pub edge_bound: u64,
}

/// Qubits needed to store one search node: each set is stored as a size
/// register plus a null-padded list of entries.
///
/// `ceil(log2(L+1)) + L*ceil(log2(B+1))
///  + sum_i (ceil(log2(|D_i|+1)) + |D_i|*ceil(log2 |V|))
///  + L*(ceil(log2(m+1)) + m*ceil(log2 |V|))`
pub fn estimate_node_qubits(p: &NodeQubitParams) -> u64 {
    let depth_register = ceil_log2(p.depth_bound + 1);
    let history = p.depth_bound * ceil_log2(p.branch_bound + 1);
    let value_bits = ceil_log2(p.value_count);
    let domains: u64 = p
        .domain_sizes
        .iter()
        .map(|&d| ceil_log2(d + 1) + d * value_bits)
        .sum();
    let removals = p.depth_bound * (ceil_log2(p.edge_bound + 1) + p.edge_bound * value_bits);
    depth_register + history + domains + removals
}
