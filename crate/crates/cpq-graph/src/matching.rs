use std::collections::VecDeque;

use crate::value_graph::{GraphError, VariableValueGraph};

/// A partial matching in a variable-value graph, stored as the matched
/// value vertex of each variable vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    var_to_val: Vec<Option<usize>>,
}

impl Matching {
    pub fn empty(var_count: usize) -> Self {
        Matching {
            var_to_val: vec![None; var_count],
        }
    }

    pub fn from_pairs(var_count: usize, pairs: &[(usize, usize)]) -> Self {
        let mut m = Matching::empty(var_count);
        for &(x, j) in pairs {
            m.var_to_val[x] = Some(j);
        }
        m
    }

    pub fn size(&self) -> usize {
        self.var_to_val.iter().filter(|v| v.is_some()).count()
    }

    pub fn val_of(&self, x: usize) -> Option<usize> {
        self.var_to_val[x]
    }

    pub fn var_count(&self) -> usize {
        self.var_to_val.len()
    }

    /// Inverse map: matched variable of each value vertex.
    pub fn val_to_var(&self, val_count: usize) -> Vec<Option<usize>> {
        let mut inv = vec![None; val_count];
        for (x, v) in self.var_to_val.iter().enumerate() {
            if let Some(j) = v {
                inv[*j] = Some(x);
            }
        }
        inv
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.var_to_val
            .iter()
            .enumerate()
            .filter_map(|(x, v)| v.map(|j| (x, j)))
            .collect()
    }

    /// Drops the matched edge of the highest-indexed matched variable,
    /// leaving a matching one short of the input (no-op on an empty
    /// matching).
    pub fn truncated(&self) -> Matching {
        let mut m = self.clone();
        if let Some(x) = (0..m.var_to_val.len()).rev().find(|&x| m.var_to_val[x].is_some()) {
            m.var_to_val[x] = None;
        }
        m
    }

    fn validate_in(&self, g: &VariableValueGraph) -> Result<(), GraphError> {
        for (x, v) in self.var_to_val.iter().enumerate() {
            if let Some(j) = v {
                if !g.has_edge(x, *j) {
                    return Err(GraphError::EdgeNotInGraph(x, *j));
                }
            }
        }
        Ok(())
    }
}

/// Maximum-cardinality bipartite matching via Hopcroft-Karp, together
/// with the number of phases the algorithm ran. Deterministic for a given
/// adjacency order.
pub fn max_matching_hk_with_phases(g: &VariableValueGraph) -> (Matching, usize) {
    let nx = g.var_count();
    let nv = g.val_count();
    let mut pair_x: Vec<Option<usize>> = vec![None; nx];
    let mut pair_v: Vec<Option<usize>> = vec![None; nv];
    let mut dist: Vec<u32> = vec![0; nx];
    let mut phases = 0usize;

    const INF: u32 = u32::MAX;

    loop {
        // BFS layering from free variable vertices.
        let mut queue = VecDeque::new();
        for x in 0..nx {
            if pair_x[x].is_none() {
                dist[x] = 0;
                queue.push_back(x);
            } else {
                dist[x] = INF;
            }
        }
        let mut found_free_value = false;
        while let Some(x) = queue.pop_front() {
            for &j in g.adj(x) {
                match pair_v[j] {
                    None => found_free_value = true,
                    Some(x2) => {
                        if dist[x2] == INF {
                            dist[x2] = dist[x] + 1;
                            queue.push_back(x2);
                        }
                    }
                }
            }
        }
        if !found_free_value {
            break;
        }
        phases += 1;
        // DFS along the layering, augmenting along disjoint shortest paths.
        fn try_augment(
            x: usize,
            g: &VariableValueGraph,
            pair_x: &mut [Option<usize>],
            pair_v: &mut [Option<usize>],
            dist: &mut [u32],
        ) -> bool {
            for &j in g.adj(x) {
                let ok = match pair_v[j] {
                    None => true,
                    Some(x2) => {
                        dist[x2] == dist[x].wrapping_add(1)
                            && try_augment(x2, g, pair_x, pair_v, dist)
                    }
                };
                if ok {
                    pair_x[x] = Some(j);
                    pair_v[j] = Some(x);
                    return true;
                }
            }
            dist[x] = u32::MAX;
            false
        }
        for x in 0..nx {
            if pair_x[x].is_none() {
                try_augment(x, g, &mut pair_x, &mut pair_v, &mut dist);
            }
        }
    }

    (Matching { var_to_val: pair_x }, phases)
}

/// Maximum-cardinality matching (phase count discarded).
pub fn max_matching_hk(g: &VariableValueGraph) -> Matching {
    max_matching_hk_with_phases(g).0
}

/// Decides whether `m` is a maximum matching of `g` in linear time by
/// building the alternating-reachability vertex cover and comparing its
/// size to `|m|`; the two agree exactly when no augmenting path exists.
pub fn verify_matching_maximum(g: &VariableValueGraph, m: &Matching) -> Result<bool, GraphError> {
    m.validate_in(g)?;
    let nx = g.var_count();
    let nv = g.val_count();
    let val_to_var = m.val_to_var(nv);

    // Alternating BFS from free variable vertices: unmatched edges
    // rightward, matched edges leftward.
    let mut x_reached = vec![false; nx];
    let mut v_reached = vec![false; nv];
    let mut queue = VecDeque::new();
    for x in 0..nx {
        if m.val_of(x).is_none() {
            x_reached[x] = true;
            queue.push_back(x);
        }
    }
    while let Some(x) = queue.pop_front() {
        for &j in g.adj(x) {
            if m.val_of(x) == Some(j) || v_reached[j] {
                continue;
            }
            v_reached[j] = true;
            if let Some(x2) = val_to_var[j] {
                if !x_reached[x2] {
                    x_reached[x2] = true;
                    queue.push_back(x2);
                }
            }
        }
    }

    let cover = (0..nx).filter(|&x| !x_reached[x]).count()
        + (0..nv).filter(|&j| v_reached[j]).count();
    Ok(cover == m.size())
}
