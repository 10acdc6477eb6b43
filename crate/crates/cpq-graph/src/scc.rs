/// Vertex-to-component mapping of a directed graph. Component ids are
/// contiguous in `0..count`, assigned in the order components complete.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SccMap {
    pub comp: Vec<usize>,
    pub count: usize,
}

impl SccMap {
    pub fn same_component(&self, u: usize, v: usize) -> bool {
        self.comp[u] == self.comp[v]
    }

    /// Vertices grouped by component id.
    pub fn groups(&self) -> Vec<Vec<usize>> {
        let mut groups = vec![Vec::new(); self.count];
        for (v, &c) in self.comp.iter().enumerate() {
            groups[c].push(v);
        }
        groups
    }

    /// Canonical partition: each block sorted, blocks ordered by minimum
    /// element. Component ids themselves depend on traversal order, so
    /// comparisons should go through this.
    pub fn partition(&self) -> Vec<Vec<usize>> {
        let mut groups = self.groups();
        groups.sort_by_key(|g| g.first().copied());
        groups
    }
}

/// Strongly connected components by a single depth-first pass with
/// index/lowlink bookkeeping. The DFS is run with an explicit frame stack
/// so deep graphs cannot overflow the call stack.
pub fn tarjan_scc(out_adj: &[Vec<usize>]) -> SccMap {
    let n = out_adj.len();
    let mut index: Vec<Option<usize>> = vec![None; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut comp = vec![usize::MAX; n];
    let mut count = 0usize;
    let mut next_index = 0usize;

    // Each frame is (vertex, position in its adjacency list).
    let mut frames: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root].is_some() {
            continue;
        }
        index[root] = Some(next_index);
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        frames.push((root, 0));

        while let Some(&mut (v, ref mut i)) = frames.last_mut() {
            if *i < out_adj[v].len() {
                let w = out_adj[v][*i];
                *i += 1;
                match index[w] {
                    None => {
                        index[w] = Some(next_index);
                        low[w] = next_index;
                        next_index += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        frames.push((w, 0));
                    }
                    Some(iw) => {
                        if on_stack[w] {
                            low[v] = low[v].min(iw);
                        }
                    }
                }
            } else {
                frames.pop();
                if let Some(&mut (parent, _)) = frames.last_mut() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v].unwrap() {
                    loop {
                        let u = stack.pop().expect("component stack underflow");
                        on_stack[u] = false;
                        comp[u] = count;
                        if u == v {
                            break;
                        }
                    }
                    count += 1;
                }
            }
        }
    }

    SccMap { comp, count }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edgeless_graph_is_all_singletons() {
        let s = tarjan_scc(&vec![vec![]; 4]);
        assert_eq!(s.count, 4);
        let p = s.partition();
        assert_eq!(p, vec![vec![0], vec![1], vec![2], vec![3]]);
    }

    #[test]
    fn cycle_is_one_component() {
        let adj = vec![vec![1], vec![2], vec![0]];
        let s = tarjan_scc(&adj);
        assert_eq!(s.count, 1);
    }

    #[test]
    fn component_ids_are_contiguous() {
        let adj = vec![vec![1], vec![0], vec![3], vec![], vec![2]];
        let s = tarjan_scc(&adj);
        assert!(s.count >= 1 && s.count <= adj.len());
        let mut seen = vec![false; s.count];
        for &c in &s.comp {
            seen[c] = true;
        }
        assert!(seen.into_iter().all(|b| b));
    }

    #[test]
    fn deep_path_does_not_overflow() {
        let n = 200_000;
        let mut adj = vec![Vec::new(); n];
        for v in 0..n - 1 {
            adj[v].push(v + 1);
        }
        let s = tarjan_scc(&adj);
        assert_eq!(s.count, n);
    }
}
