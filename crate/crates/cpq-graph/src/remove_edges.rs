use std::collections::{HashSet, VecDeque};

use crate::matching::Matching;
use crate::scc::{tarjan_scc, SccMap};
use crate::value_graph::{GraphError, VariableValueGraph};

/// Orientation of a variable-value graph under a matching: matched edges
/// point from variable to value, all others from value to variable.
/// Vertices share one index space, variables first (`0..var_count`), then
/// values (`var_count..var_count + val_count`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectedValueGraph {
    pub var_count: usize,
    pub val_count: usize,
    out_adj: Vec<Vec<usize>>,
}

impl DirectedValueGraph {
    pub fn vertex_count(&self) -> usize {
        self.var_count + self.val_count
    }

    pub fn out_adj(&self) -> &[Vec<usize>] {
        &self.out_adj
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_adj[v].len()
    }

    pub fn value_vertex(&self, j: usize) -> usize {
        self.var_count + j
    }
}

/// Orients `g` under `m`.
pub fn direct_graph(g: &VariableValueGraph, m: &Matching) -> DirectedValueGraph {
    let nx = g.var_count();
    let mut out_adj = vec![Vec::new(); g.vertex_count()];
    for x in 0..nx {
        for &j in g.adj(x) {
            if m.val_of(x) == Some(j) {
                out_adj[x].push(nx + j);
            } else {
                out_adj[nx + j].push(x);
            }
        }
    }
    DirectedValueGraph {
        var_count: nx,
        val_count: g.val_count(),
        out_adj,
    }
}

/// Edges reachable from the unmatched value vertices of `dg`, found by a
/// simultaneous breadth-first search; every out-edge of a reached vertex
/// counts. Returned as directed `(from, to)` pairs over the shared vertex
/// index space, sorted.
pub fn find_simple_paths(dg: &DirectedValueGraph, m: &Matching) -> Vec<(usize, usize)> {
    let matched_vals = m.val_to_var(dg.val_count);
    let mut visited = vec![false; dg.vertex_count()];
    let mut queue = VecDeque::new();
    for j in 0..dg.val_count {
        if matched_vals[j].is_none() {
            let v = dg.value_vertex(j);
            visited[v] = true;
            queue.push_back(v);
        }
    }
    let mut used = Vec::new();
    while let Some(u) = queue.pop_front() {
        for &w in &dg.out_adj[u] {
            used.push((u, w));
            if !visited[w] {
                visited[w] = true;
                queue.push_back(w);
            }
        }
    }
    used.sort_unstable();
    used
}

fn undirected(edge: (usize, usize), var_count: usize) -> (usize, usize) {
    let (u, w) = edge;
    if u < var_count {
        (u, w - var_count)
    } else {
        (w, u - var_count)
    }
}

/// The classical edge-removal pipeline: orient the graph, mark edges on
/// alternating paths from unmatched value vertices, compute components,
/// then collect every edge that is neither matched, nor marked, nor
/// inside a component. Those are exactly the edges participating in no
/// maximum matching. Requires `m` to cover every variable vertex.
///
/// Returns `(variable, value-vertex)` pairs sorted lexicographically.
pub fn remove_edges_classical(
    g: &VariableValueGraph,
    m: &Matching,
) -> Result<Vec<(usize, usize)>, GraphError> {
    if m.size() != g.var_count() {
        return Err(GraphError::NotSaturating {
            expected: g.var_count(),
            got: m.size(),
        });
    }
    let dg = direct_graph(g, m);
    let used: HashSet<(usize, usize)> = find_simple_paths(&dg, m)
        .into_iter()
        .map(|e| undirected(e, g.var_count()))
        .collect();
    let scc = tarjan_scc(dg.out_adj());
    Ok(identify_edges(g, m, &used, &scc))
}

/// The final edge scan, exposed for reuse by the charged-query analog.
pub fn identify_edges(
    g: &VariableValueGraph,
    m: &Matching,
    used: &HashSet<(usize, usize)>,
    scc: &SccMap,
) -> Vec<(usize, usize)> {
    let nx = g.var_count();
    let mut removed = Vec::new();
    for x in 0..nx {
        for &j in g.adj(x) {
            if m.val_of(x) != Some(j)
                && !used.contains(&(x, j))
                && !scc.same_component(x, nx + j)
            {
                removed.push((x, j));
            }
        }
    }
    removed
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::max_matching_hk;
    use crate::value_graph::build_value_graph;
    use cpq_core::DomainTuple;

    fn worked_example() -> (VariableValueGraph, Matching) {
        let d = DomainTuple::new(vec![vec![1, 2], vec![1, 2], vec![2, 3, 4]]);
        let g = build_value_graph(&d, &[0, 1, 2]).unwrap();
        let m = max_matching_hk(&g);
        (g, m)
    }

    #[test]
    fn worked_example_pipeline() {
        let (g, m) = worked_example();
        assert_eq!(m.size(), 3);
        let dg = direct_graph(&g, &m);
        // |M| right-facing edges, |E| - |M| left-facing.
        let right: usize = (0..3).map(|x| dg.out_degree(x)).sum();
        let left: usize = (3..7).map(|v| dg.out_degree(v)).sum();
        assert_eq!(right, 3);
        assert_eq!(left, 4);

        // {x1, x2, d1, d2} form a component; the rest are trivial.
        let scc = tarjan_scc(dg.out_adj());
        let partition = scc.partition();
        assert!(partition.contains(&vec![0, 1, 3, 4]));
        assert_eq!(partition.len(), 4);

        // The lone removable edge is (x3, d2), whichever maximum
        // matching the search starts from.
        let removed = remove_edges_classical(&g, &m).unwrap();
        assert_eq!(removed, vec![(2, 1)]);
    }

    #[test]
    fn worked_example_with_displayed_matching() {
        // The matching x1-d2, x2-d1, x3-d4 leaves d3 unmatched; the
        // search then walks d3 -> x3 -> d4 and nothing else.
        let (g, _) = worked_example();
        let m = Matching::from_pairs(3, &[(0, 1), (1, 0), (2, 3)]);
        let dg = direct_graph(&g, &m);
        let used = find_simple_paths(&dg, &m);
        assert_eq!(used, vec![(2, 6), (5, 2)]);

        let scc = tarjan_scc(dg.out_adj());
        assert_eq!(
            scc.partition(),
            vec![vec![0, 1, 3, 4], vec![2], vec![5], vec![6]]
        );
        let removed = remove_edges_classical(&g, &m).unwrap();
        assert_eq!(removed, vec![(2, 1)]);
    }

    #[test]
    fn complete_k22_removes_nothing() {
        let d = DomainTuple::new(vec![vec![1, 2], vec![1, 2]]);
        let g = build_value_graph(&d, &[0, 1]).unwrap();
        let m = max_matching_hk(&g);
        assert_eq!(remove_edges_classical(&g, &m).unwrap(), vec![]);
    }

    #[test]
    fn non_saturating_matching_is_an_error() {
        let (g, _) = worked_example();
        let m = Matching::empty(3);
        assert!(matches!(
            remove_edges_classical(&g, &m),
            Err(GraphError::NotSaturating { .. })
        ));
    }
}
