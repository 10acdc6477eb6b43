use std::collections::BTreeSet;

use cpq_sim::{CostModel, QueryLedger};

use crate::tree::{NodeId, SearchTree, TreeError};
use crate::walk::{find_marked_with, AlphaPolicy, WalkError, DETECT_TOLERANCE};

/// A contiguous slice of the depth-first traversal: the nodes ranked in
/// `(tau, tau_prime]` plus the root paths that connect them, each path
/// defined by the node at the corresponding rank boundary.
#[derive(Clone, Debug)]
pub struct ChunkSpec {
    pub tau: usize,
    pub tau_prime: usize,
    /// Root path of the node ranked `tau` (empty when `tau == 0`).
    pub lower_path: Vec<NodeId>,
    /// Root path of the node ranked `tau_prime`.
    pub upper_path: Vec<NodeId>,
    /// All nodes of the chunk, ascending by id.
    pub nodes: Vec<NodeId>,
}

/// Materializes the chunk `(tau, tau_prime]` of the tree's depth-first
/// order together with its two defining paths.
pub fn chunk_spec(
    tree: &SearchTree,
    tau: usize,
    tau_prime: usize,
) -> Result<ChunkSpec, TreeError> {
    let t = tree.len();
    if tau >= tau_prime || tau_prime > t {
        return Err(TreeError::ChunkOutOfRange(tau_prime, t));
    }
    let order = tree.dfs_order();
    let lower_path = if tau == 0 {
        Vec::new()
    } else {
        tree.root_path(order[tau - 1])
    };
    let upper_path = tree.root_path(order[tau_prime - 1]);

    let mut keep: BTreeSet<NodeId> = order[tau..tau_prime].iter().copied().collect();
    // Connect every chunk node to the root; the extra nodes all lie on
    // the lower boundary path.
    for &id in &order[tau..tau_prime] {
        let mut cur = id;
        while let Some(p) = tree.parent(cur) {
            if !keep.insert(p) {
                break;
            }
            cur = p;
        }
    }
    Ok(ChunkSpec {
        tau,
        tau_prime,
        lower_path,
        upper_path,
        nodes: keep.into_iter().collect(),
    })
}

/// Child count of `node` inside the prefix subtree defined by `path`
/// (the root path of the prefix's last node): zero at the path's end,
/// truncated to the followed branch along the path, and the full child
/// count elsewhere.
pub fn path_child_count(tree: &SearchTree, path: &[NodeId], node: NodeId) -> usize {
    match path.iter().position(|&u| u == node) {
        Some(pos) if pos + 1 == path.len() => 0,
        Some(pos) => {
            let next = path[pos + 1];
            tree.children(node)
                .iter()
                .position(|&c| c == next)
                .map(|i| i + 1)
                .expect("path steps to a child")
        }
        None => tree.children(node).len(),
    }
}

/// Walk-based search over the tree in depth-first chunks of `chi` nodes:
/// each chunk is detected with its own restricted walk operator, and the
/// first positive chunk is descended. Equivalent to a whole-tree search;
/// a chunk size covering the tree delegates to it outright.
pub fn chunky_search(
    tree: &SearchTree,
    chi: usize,
    policy: AlphaPolicy,
    model: &CostModel,
    ledger: &mut QueryLedger,
) -> Result<Option<NodeId>, WalkError> {
    assert!(chi >= 1);
    let t = tree.len();
    if chi >= t {
        return find_marked_with(tree, policy, &tree.marked_flags(), model, ledger);
    }
    let marked = tree.marked_flags();
    let l = tree.depth().max(1);
    let mut tau = 0;
    while tau < t {
        let tau_prime = (tau + chi).min(t);
        let spec = chunk_spec(tree, tau, tau_prime).expect("boundaries within tree");
        let (chunk_tree, mapping) = tree.induced(tree.root(), &spec.nodes);
        let chunk_marked: Vec<bool> = mapping.iter().map(|&old| marked[old]).collect();

        // Per-chunk budget: detection over at most chi + L nodes, plus
        // the boundary-path derivation.
        let budget = (chi + l) as u64;
        let rep = model.repetitions(budget);
        let detect_charge = (((budget * l as u64) as f64).sqrt().ceil()) as u64 * rep;
        let path_charge =
            (((budget * (l * l * l) as u64) as f64).sqrt().ceil()) as u64 * rep;
        ledger.walk_calls += detect_charge + path_charge;

        let alpha = policy.alpha_for(&chunk_tree, &chunk_marked);
        let projection =
            crate::walk::root_projection(&chunk_tree, alpha, &chunk_marked)?;
        if projection > DETECT_TOLERANCE {
            let found =
                find_marked_with(&chunk_tree, policy, &chunk_marked, model, ledger)?
                    .expect("positive chunk contains a marked node");
            return Ok(Some(mapping[found]));
        }
        tau = tau_prime;
    }
    Ok(None)
}

/// Search bounded to `l_star` levels below `start`: finds the feasible
/// nodes within range and the indeterminate frontier at exactly that
/// depth. Depth one degenerates to a single direct search over the
/// children; deeper bounds run walk detection on the truncated subtree
/// with frontier nodes treated as marked, extracting one node per round.
pub fn bounded_depth_search(
    tree: &SearchTree,
    start: NodeId,
    l_star: usize,
    model: &CostModel,
    ledger: &mut QueryLedger,
) -> Result<(Vec<NodeId>, Vec<NodeId>), WalkError> {
    assert!(l_star >= 1);
    use cpq_core::Beta;

    // A feasible start needs no search below it.
    if tree.is_marked(start) {
        return Ok((vec![start], Vec::new()));
    }

    if l_star == 1 {
        let children = tree.children(start);
        let mut solutions = Vec::new();
        let mut frontier = Vec::new();
        for &c in children {
            match tree.beta(c) {
                Beta::Feasible => solutions.push(c),
                Beta::Unknown => frontier.push(c),
                Beta::Infeasible => {}
            }
        }
        if !children.is_empty() {
            let n = children.len() as u64;
            let hits = (solutions.len() + frontier.len()) as u64;
            let base = model.grover_constant * ((n * hits.max(1)) as f64).sqrt();
            let charge = (base.ceil() as u64) * model.repetitions(n);
            ledger.oracle_queries += charge;
            ledger.searches_attempted += 1;
        }
        return Ok((solutions, frontier));
    }

    // Truncate the subtree at depth l_star below start.
    let (sub, mapping) = tree.subtree(start);
    let keep: Vec<NodeId> = (0..sub.len())
        .filter(|&id| sub.node_depth(id) <= l_star)
        .collect();
    let (trunc, trunc_map) = sub.induced(sub.root(), &keep);
    // Compose mappings back to the original tree.
    let original: Vec<NodeId> = trunc_map.iter().map(|&mid| mapping[mid]).collect();

    let mut flags: Vec<bool> = (0..trunc.len())
        .map(|id| {
            let beta = tree.beta(original[id]);
            beta == Beta::Feasible
                || (beta == Beta::Unknown && trunc.node_depth(id) == l_star)
        })
        .collect();

    let mut solutions = Vec::new();
    let mut frontier = Vec::new();
    let t = trunc.len() as u64;
    let detect_charge =
        (((t * l_star as u64) as f64).sqrt().ceil()) as u64 * model.repetitions(t);
    loop {
        ledger.walk_calls += detect_charge;
        let alpha = l_star.max(1) as f64;
        let projection = crate::walk::root_projection(&trunc, alpha, &flags)?;
        if projection <= DETECT_TOLERANCE {
            break;
        }
        let found = find_marked_with(&trunc, AlphaPolicy::DepthBound, &flags, model, ledger)?
            .expect("positive detection yields a node");
        let orig = original[found];
        if tree.beta(orig) == Beta::Feasible {
            solutions.push(orig);
        } else {
            frontier.push(orig);
        }
        flags[found] = false;
    }
    solutions.sort_unstable();
    frontier.sort_unstable();
    Ok((solutions, frontier))
}
