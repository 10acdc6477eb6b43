use std::collections::{HashMap, HashSet};

use cpq_core::{DomainTuple, FilterOutcome, Value, VarId};
use cpq_graph::VariableValueGraph;

use crate::kernel::{ClassicalKernel, MatchingKernel};

/// Occurrence-bound filtering for a set of counted values.
///
/// Feasibility is decided by two matchings: one saturating the variables
/// in the graph where each counted value is duplicated up to its upper
/// bound (values not counted get one reserved vertex per variable, i.e.
/// they are unconstrained), and one covering every lower-bound duplicate
/// with distinct variables. By an exchange argument on the union of the
/// two matchings, both existing is exactly equivalent to satisfiability.
///
/// Pruning applies the no-maximum-matching rule on the upper-bound graph,
/// which is sound but ignores lower bounds, except in the saturated case
/// `sum(lo) == |scope|`, where every variable must serve a lower-bound
/// duplicate and the same rule on the lower-bound graph applies too.
pub fn filter_gcc_with(
    domains: &DomainTuple,
    scope: &[VarId],
    values: &[Value],
    bounds: &[(u32, u32)],
    kernel: &mut dyn MatchingKernel,
) -> FilterOutcome {
    debug_assert_eq!(values.len(), bounds.len());
    let cap: HashMap<Value, u32> = values.iter().copied().zip(bounds.iter().map(|b| b.1)).collect();

    let mut out = domains.clone();
    let mut removed = Vec::new();

    // Values capped at zero can never be used.
    for &var in scope {
        for v in out.get(var).to_vec() {
            if cap.get(&v) == Some(&0) {
                out.remove(var, v);
                removed.push((var, v));
            }
        }
        if out.get(var).is_empty() {
            return FilterOutcome::Infeasible;
        }
    }

    let upper = duplicated_graph(&out, scope, values, bounds, DupSide::Upper);
    let m_up = kernel.max_matching(&upper.graph);
    if m_up.size() < scope.len() {
        return FilterOutcome::Infeasible;
    }

    let lower_total: u32 = bounds.iter().map(|b| b.0).sum();
    let lower = duplicated_graph(&out, scope, values, bounds, DupSide::Lower);
    let m_lo = kernel.max_matching(&lower.graph);
    if (m_lo.size() as u32) < lower_total {
        return FilterOutcome::Infeasible;
    }

    prune_fully_removed(&upper, scope, kernel.remove_edges(&upper.graph, &m_up), &mut out, &mut removed);

    if lower_total as usize == scope.len() {
        // Every variable serves some counted value with a positive lower
        // bound; values outside that set are impossible.
        let required: HashSet<Value> = values
            .iter()
            .zip(bounds.iter())
            .filter(|(_, b)| b.0 > 0)
            .map(|(&v, _)| v)
            .collect();
        for &var in scope {
            for v in out.get(var).to_vec() {
                if !required.contains(&v) {
                    out.remove(var, v);
                    removed.push((var, v));
                }
            }
        }
        prune_fully_removed(&lower, scope, kernel.remove_edges(&lower.graph, &m_lo), &mut out, &mut removed);
    }

    FilterOutcome::Filtered {
        domains: out,
        removed,
    }
}

pub fn filter_gcc(
    domains: &DomainTuple,
    scope: &[VarId],
    values: &[Value],
    bounds: &[(u32, u32)],
) -> FilterOutcome {
    filter_gcc_with(domains, scope, values, bounds, &mut ClassicalKernel)
}

enum DupSide {
    Upper,
    Lower,
}

struct DuplicatedGraph {
    graph: VariableValueGraph,
    /// Vertex indices of each counted value's duplicates, in copy order.
    copies: HashMap<Value, Vec<usize>>,
}

/// Builds the duplicated bipartite graph. Counted values get one vertex
/// per permitted occurrence (copies laid out contiguously, ascending by
/// value); in the upper graph, every other domain value gets a vertex
/// reserved to its variable. The lower graph contains only the
/// lower-bound duplicates.
fn duplicated_graph(
    domains: &DomainTuple,
    scope: &[VarId],
    values: &[Value],
    bounds: &[(u32, u32)],
    side: DupSide,
) -> DuplicatedGraph {
    let mut ordered: Vec<(Value, u32)> = values
        .iter()
        .zip(bounds.iter())
        .map(|(&v, &(lo, hi))| {
            (
                v,
                match side {
                    DupSide::Upper => hi,
                    DupSide::Lower => lo,
                },
            )
        })
        .collect();
    ordered.sort_by_key(|&(v, _)| v);

    let mut vertex_values = Vec::new();
    let mut copies: HashMap<Value, Vec<usize>> = HashMap::new();
    for (v, count) in &ordered {
        let ids = (0..*count).map(|k| vertex_values.len() + k as usize).collect();
        copies.insert(*v, ids);
        vertex_values.extend(std::iter::repeat(*v).take(*count as usize));
    }

    let counted: HashSet<Value> = values.iter().copied().collect();
    let mut var_adj: Vec<Vec<usize>> = Vec::with_capacity(scope.len());
    let mut reserved: Vec<(usize, Value)> = Vec::new();
    for (i, &var) in scope.iter().enumerate() {
        let mut adj = Vec::new();
        for &v in domains.get(var) {
            if counted.contains(&v) {
                adj.extend(copies.get(&v).into_iter().flatten().copied());
            } else if matches!(side, DupSide::Upper) {
                reserved.push((i, v));
            }
        }
        var_adj.push(adj);
    }
    for (i, v) in reserved {
        let id = vertex_values.len();
        vertex_values.push(v);
        var_adj[i].push(id);
    }

    DuplicatedGraph {
        graph: VariableValueGraph::from_adjacency(var_adj, vertex_values),
        copies,
    }
}

/// Prunes `(variable, value)` pairs all of whose duplicate edges were
/// removed; pairs with a surviving duplicate still have a supporting
/// matching. Reserved vertices never appear in the removal set.
fn prune_fully_removed(
    dup: &DuplicatedGraph,
    scope: &[VarId],
    removed_edges: Vec<(usize, usize)>,
    out: &mut DomainTuple,
    removed: &mut Vec<(VarId, Value)>,
) {
    let removed_set: HashSet<(usize, usize)> = removed_edges.into_iter().collect();
    if removed_set.is_empty() {
        return;
    }
    for (i, &var) in scope.iter().enumerate() {
        for v in out.get(var).to_vec() {
            if let Some(ids) = dup.copies.get(&v) {
                if !ids.is_empty() && ids.iter().all(|&j| removed_set.contains(&(i, j))) {
                    out.remove(var, v);
                    removed.push((var, v));
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn saturated_lower_bounds_force_counted_values() {
        // Three variables, value 10 required exactly 3 times: the
        // alternative value is pruned everywhere.
        let d = DomainTuple::new(vec![vec![10, 20], vec![10, 20], vec![10, 20]]);
        match filter_gcc(&d, &[0, 1, 2], &[10], &[(3, 3)]) {
            FilterOutcome::Filtered { domains, removed } => {
                assert_eq!(removed.len(), 3);
                for var in 0..3 {
                    assert_eq!(domains.get(var), &[10]);
                }
            }
            other => panic!("unexpected outcome {other:?}"),
        }
    }

    #[test]
    fn trivial_bounds_are_a_no_op() {
        let d = DomainTuple::new(vec![vec![1, 2], vec![1, 2]]);
        match filter_gcc(&d, &[0, 1], &[1, 2], &[(0, 2), (0, 2)]) {
            FilterOutcome::Filtered { domains, removed } => {
                assert!(removed.is_empty());
                assert_eq!(domains, d);
            }
            other => panic!("unexpected outcome {other:?}"),
        }
    }

    #[test]
    fn lower_bounds_exceeding_scope_are_infeasible() {
        let d = DomainTuple::new(vec![vec![1], vec![1]]);
        assert_eq!(
            filter_gcc(&d, &[0, 1], &[1], &[(3, 3)]),
            FilterOutcome::Infeasible
        );
    }

    #[test]
    fn zero_capped_value_is_pruned() {
        let d = DomainTuple::new(vec![vec![1, 2], vec![2]]);
        match filter_gcc(&d, &[0, 1], &[1], &[(0, 0)]) {
            FilterOutcome::Filtered { domains, removed } => {
                assert_eq!(removed, vec![(0, 1)]);
                assert_eq!(domains.get(0), &[2]);
            }
            other => panic!("unexpected outcome {other:?}"),
        }
    }

    #[test]
    fn uncounted_values_are_unconstrained() {
        // Bounds touch value 1 only; both variables may still take 9.
        let d = DomainTuple::new(vec![vec![1, 9], vec![1, 9]]);
        match filter_gcc(&d, &[0, 1], &[1], &[(0, 1)]) {
            FilterOutcome::Filtered { domains, removed } => {
                assert!(removed.is_empty());
                assert_eq!(domains, d);
            }
            other => panic!("unexpected outcome {other:?}"),
        }
    }
}
