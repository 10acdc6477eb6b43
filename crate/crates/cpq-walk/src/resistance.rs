use crate::tree::SearchTree;
use crate::walk::WalkError;

/// Exact effective resistance from the root to the set of marked nodes,
/// treating every tree edge as a unit resistor and the marked set as a
/// single grounded terminal. Computed by series/parallel reduction in one
/// post-order pass: a marked node short-circuits its subtree; otherwise
/// each child contributes conductance `1 / (1 + r_child)`.
pub fn effective_resistance_with(tree: &SearchTree, marked: &[bool]) -> Result<f64, WalkError> {
    // Post-order: children before parents; the depth-first order reversed
    // works since parents precede children there.
    let mut resistance: Vec<Option<f64>> = vec![None; tree.len()];
    for &id in tree.dfs_order().iter().rev() {
        if marked[id] {
            resistance[id] = Some(0.0);
            continue;
        }
        let mut conductance = 0.0;
        for &c in tree.children(id) {
            if let Some(rc) = resistance[c] {
                conductance += 1.0 / (1.0 + rc);
            }
        }
        resistance[id] = (conductance > 0.0).then(|| 1.0 / conductance);
    }
    resistance[tree.root()].ok_or(WalkError::NoMarkedNode)
}

pub fn effective_resistance(tree: &SearchTree) -> Result<f64, WalkError> {
    effective_resistance_with(tree, &tree.marked_flags())
}
