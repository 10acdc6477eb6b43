use thiserror::Error;

use cpq_core::{
    branch, propagate, Beta, BranchStrategy, Csp, DomainTuple, FilterBank, Value, VarId,
};

pub type NodeId = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("tree expansion exceeded the {0}-node limit")]
    NodeLimit(usize),
    #[error("chunk boundary {0} exceeds the tree size {1}")]
    ChunkOutOfRange(usize, usize),
    #[error("node {0} is not in the tree")]
    UnknownNode(usize),
}

/// Label of one search node: how many branching decisions led here, which
/// child was taken at each level, the domains the node inherited (before
/// its own filtering pass), and the pairs removed at each level by
/// filtering plus branching.
#[derive(Clone, Debug, PartialEq)]
pub struct TreeNode {
    pub branch_count: usize,
    /// 1-based child indices, one per posted branching decision; levels
    /// past `branch_count` are implicitly unset.
    pub history: Vec<u32>,
    pub domains: DomainTuple,
    /// Removed `(variable, value)` pairs per level; entry `k` is what the
    /// `k+1`-th branching decision stripped from its parent's domains.
    pub removals: Vec<Vec<(VarId, Value)>>,
}

#[derive(Clone, Debug)]
pub struct NodeData {
    pub label: TreeNode,
    pub parent: Option<NodeId>,
    pub children: Vec<NodeId>,
    pub beta: Beta,
    /// Domains after this node's propagation pass; children branch on
    /// these, and a feasible node's assignment is read off them.
    pub filtered: DomainTuple,
    /// Depth relative to this tree's root (subtree views rebase it; the
    /// label keeps the original branch count).
    pub depth: usize,
}

/// A fully materialized search tree. Nodes are indexed in breadth-first
/// order with the root at index 0; a depth-first order consistent with
/// child order is precomputed for chunked traversal.
#[derive(Clone, Debug)]
pub struct SearchTree {
    nodes: Vec<NodeData>,
    depth: usize,
    dfs_order: Vec<NodeId>,
    dfs_rank: Vec<usize>,
}

impl SearchTree {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> NodeId {
        0
    }

    /// Maximum branch depth over all nodes.
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn node(&self, id: NodeId) -> &NodeData {
        &self.nodes[id]
    }

    pub fn children(&self, id: NodeId) -> &[NodeId] {
        &self.nodes[id].children
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.nodes[id].parent
    }

    pub fn node_depth(&self, id: NodeId) -> usize {
        self.nodes[id].depth
    }

    pub fn beta(&self, id: NodeId) -> Beta {
        self.nodes[id].beta
    }

    pub fn is_marked(&self, id: NodeId) -> bool {
        self.nodes[id].beta == Beta::Feasible
    }

    pub fn marked_nodes(&self) -> Vec<NodeId> {
        (0..self.len()).filter(|&id| self.is_marked(id)).collect()
    }

    /// Default marking: the definitely-feasible nodes.
    pub fn marked_flags(&self) -> Vec<bool> {
        (0..self.len()).map(|id| self.is_marked(id)).collect()
    }

    /// Nodes in depth-first order (children visited in branch order).
    pub fn dfs_order(&self) -> &[NodeId] {
        &self.dfs_order
    }

    /// 1-based depth-first rank of a node.
    pub fn dfs_rank(&self, id: NodeId) -> usize {
        self.dfs_rank[id]
    }

    /// Path from the root to `id`, inclusive.
    pub fn root_path(&self, id: NodeId) -> Vec<NodeId> {
        let mut path = vec![id];
        let mut cur = id;
        while let Some(p) = self.nodes[cur].parent {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }

    /// The assignment at a feasible node, read off its filtered domains.
    pub fn assignment(&self, id: NodeId) -> Option<Vec<Value>> {
        self.nodes[id].filtered.singleton_assignment()
    }

    /// Extracts the subtree rooted at `new_root` as its own tree, along
    /// with the mapping from new ids to original ids.
    pub fn subtree(&self, new_root: NodeId) -> (SearchTree, Vec<NodeId>) {
        let mut keep = Vec::new();
        let mut stack = vec![new_root];
        while let Some(id) = stack.pop() {
            keep.push(id);
            for &c in self.children(id).iter().rev() {
                stack.push(c);
            }
        }
        keep.sort_unstable();
        self.induced(new_root, &keep)
    }

    /// Builds the tree induced on `keep` (sorted, parent-closed towards
    /// `root`), preserving child order. Returns the new tree and the
    /// new-to-old id mapping.
    pub fn induced(&self, root: NodeId, keep: &[NodeId]) -> (SearchTree, Vec<NodeId>) {
        debug_assert!(keep.windows(2).all(|w| w[0] < w[1]));
        let position = |id: NodeId| keep.binary_search(&id).ok();
        let mut nodes: Vec<NodeData> = Vec::with_capacity(keep.len());
        // Breadth-first over the induced structure keeps the root at 0.
        let mut order: Vec<NodeId> = vec![root];
        let mut new_id = vec![usize::MAX; keep.len()];
        new_id[position(root).expect("root kept")] = 0;
        let mut head = 0;
        while head < order.len() {
            let old = order[head];
            head += 1;
            for &c in self.children(old) {
                if let Some(pos) = position(c) {
                    new_id[pos] = order.len();
                    order.push(c);
                }
            }
        }
        for &old in &order {
            let data = &self.nodes[old];
            let parent = if old == root {
                None
            } else {
                data.parent
                    .and_then(|p| position(p).map(|pos| new_id[pos]))
            };
            let children = data
                .children
                .iter()
                .filter_map(|&c| position(c).map(|pos| new_id[pos]))
                .collect();
            nodes.push(NodeData {
                label: data.label.clone(),
                parent,
                children,
                beta: data.beta,
                filtered: data.filtered.clone(),
                depth: 0,
            });
        }
        (SearchTree::finish(nodes), order)
    }

    fn finish(mut nodes: Vec<NodeData>) -> SearchTree {
        // Recompute relative depths from the local parent structure
        // (breadth-first order guarantees parents come first).
        for i in 0..nodes.len() {
            nodes[i].depth = match nodes[i].parent {
                Some(p) => nodes[p].depth + 1,
                None => 0,
            };
        }
        let depth = nodes.iter().map(|n| n.depth).max().unwrap_or(0);
        let mut dfs_order = Vec::with_capacity(nodes.len());
        let mut stack = vec![0usize];
        while let Some(id) = stack.pop() {
            dfs_order.push(id);
            for &c in nodes[id].children.iter().rev() {
                stack.push(c);
            }
        }
        let mut dfs_rank = vec![0usize; nodes.len()];
        for (pos, &id) in dfs_order.iter().enumerate() {
            dfs_rank[id] = pos + 1;
        }
        SearchTree {
            nodes,
            depth,
            dfs_order,
            dfs_rank,
        }
    }
}

/// Expands the search tree of `csp` under the given branching strategy
/// and filter bank: each node's status comes from a full propagation
/// pass, children are generated from the filtered domains, and
/// definitely-infeasible nodes are retained as leaves. Fails if more than
/// `max_nodes` nodes would be materialized.
pub fn build_tree(
    csp: &Csp,
    strategy: BranchStrategy,
    bank: &mut dyn FilterBank,
    max_nodes: usize,
) -> Result<SearchTree, TreeError> {
    let root = TreeNode {
        branch_count: 0,
        history: Vec::new(),
        domains: csp.domains.clone(),
        removals: Vec::new(),
    };
    let mut nodes: Vec<NodeData> = Vec::new();
    let mut queue = std::collections::VecDeque::new();
    queue.push_back((root, None::<NodeId>));
    while let Some((label, parent)) = queue.pop_front() {
        if nodes.len() >= max_nodes {
            return Err(TreeError::NodeLimit(max_nodes));
        }
        let result = propagate(csp, &label.domains, None, bank);
        let id = nodes.len();
        if let Some(p) = parent {
            nodes[p].children.push(id);
        }
        let data = NodeData {
            label,
            parent,
            children: Vec::new(),
            beta: result.beta,
            filtered: result.domains,
            depth: 0,
        };
        if data.beta == Beta::Unknown {
            let children =
                branch(&data.filtered, strategy).expect("indeterminate node has a branchable domain");
            for (c, child_domains) in children.into_iter().enumerate() {
                let mut history = data.label.history.clone();
                history.push(c as u32 + 1);
                let mut removals = data.label.removals.clone();
                removals.push(data.label.domains.difference(&child_domains));
                queue.push_back((
                    TreeNode {
                        branch_count: data.label.branch_count + 1,
                        history,
                        domains: child_domains,
                        removals,
                    },
                    Some(id),
                ));
            }
        }
        nodes.push(data);
    }
    Ok(SearchTree::finish(nodes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use cpq_core::{CheckingFilterBank, Constraint};

    fn two_var_csp() -> Csp {
        Csp {
            variables: vec!["x1".into(), "x2".into()],
            domains: DomainTuple::new(vec![vec![1, 2], vec![1, 2]]),
            constraints: vec![Constraint::AllDifferent { scope: vec![0, 1] }],
        }
    }

    #[test]
    fn naive_two_variable_tree_shape() {
        let csp = two_var_csp();
        let tree =
            build_tree(&csp, BranchStrategy::Assignment, &mut CheckingFilterBank, 100).unwrap();
        assert_eq!(tree.len(), 7);
        assert_eq!(tree.depth(), 2);
        assert_eq!(tree.children(0).len(), 2);
        let grandchildren: usize = tree
            .children(0)
            .iter()
            .map(|&c| tree.children(c).len())
            .sum();
        assert_eq!(grandchildren, 4);
        // Exactly the two proper assignments are marked.
        let marked = tree.marked_nodes();
        assert_eq!(marked.len(), 2);
        let mut assignments: Vec<Vec<i64>> =
            marked.iter().map(|&m| tree.assignment(m).unwrap()).collect();
        assignments.sort();
        assert_eq!(assignments, vec![vec![1, 2], vec![2, 1]]);
    }

    #[test]
    fn infeasible_root_is_a_single_node() {
        let csp = Csp {
            variables: vec!["x1".into(), "x2".into()],
            domains: DomainTuple::new(vec![vec![1], vec![1]]),
            constraints: vec![Constraint::AllDifferent { scope: vec![0, 1] }],
        };
        let tree =
            build_tree(&csp, BranchStrategy::Assignment, &mut CheckingFilterBank, 10).unwrap();
        assert_eq!(tree.len(), 1);
        assert!(tree.marked_nodes().is_empty());
        assert_eq!(tree.beta(0), Beta::Infeasible);
    }

    #[test]
    fn pigeonhole_tree_has_no_marked_node() {
        let csp = Csp {
            variables: (1..=3).map(|i| format!("x{i}")).collect(),
            domains: DomainTuple::new(vec![vec![1, 2]; 3]),
            constraints: vec![Constraint::AllDifferent {
                scope: vec![0, 1, 2],
            }],
        };
        let tree =
            build_tree(&csp, BranchStrategy::Assignment, &mut CheckingFilterBank, 100).unwrap();
        assert_eq!(tree.len(), 15);
        assert!(tree.marked_nodes().is_empty());
    }

    #[test]
    fn node_limit_is_enforced() {
        let csp = two_var_csp();
        assert!(matches!(
            build_tree(&csp, BranchStrategy::Assignment, &mut CheckingFilterBank, 3),
            Err(TreeError::NodeLimit(3))
        ));
    }

    #[test]
    fn child_labels_follow_parent_domains() {
        let csp = two_var_csp();
        let mut bank = cpq_filter::DomainConsistencyBank::classical();
        let tree = build_tree(&csp, BranchStrategy::Assignment, &mut bank, 100).unwrap();
        for id in 1..tree.len() {
            let parent = tree.parent(id).unwrap();
            let p = tree.node(parent);
            let n = tree.node(id);
            // Child domains arise by branching on the parent's filtered
            // domains; the recorded removals are everything the parent
            // carried that the child does not.
            let c = (n.label.history[n.label.history.len() - 1] - 1) as usize;
            let children = branch(&p.filtered, BranchStrategy::Assignment).unwrap();
            assert_eq!(n.label.domains, children[c]);
            assert_eq!(
                n.label.removals.last().unwrap(),
                &p.label.domains.difference(&n.label.domains)
            );
            assert_eq!(n.label.branch_count, p.label.branch_count + 1);
        }
    }

    #[test]
    fn dfs_order_is_preorder() {
        let csp = two_var_csp();
        let tree =
            build_tree(&csp, BranchStrategy::Assignment, &mut CheckingFilterBank, 100).unwrap();
        let order = tree.dfs_order();
        assert_eq!(order[0], tree.root());
        assert_eq!(tree.dfs_rank(tree.root()), 1);
        // Parents precede children.
        for &id in order {
            if let Some(p) = tree.parent(id) {
                assert!(tree.dfs_rank(p) < tree.dfs_rank(id));
            }
        }
    }

    #[test]
    fn subtree_extraction_rebases_depths() {
        let csp = two_var_csp();
        let tree =
            build_tree(&csp, BranchStrategy::Assignment, &mut CheckingFilterBank, 100).unwrap();
        let child = tree.children(0)[0];
        let (sub, mapping) = tree.subtree(child);
        assert_eq!(sub.len(), 3);
        assert_eq!(mapping[0], child);
        assert_eq!(sub.node_depth(sub.root()), 0);
        assert_eq!(sub.depth(), 1);
    }
}
