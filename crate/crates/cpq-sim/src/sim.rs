use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cpq_graph::{
    direct_graph, find_simple_paths, identify_edges, max_matching_hk, GraphError, Matching,
    SccMap, VariableValueGraph,
};

use crate::model::{CostModel, QueryLedger, SubroutineResult};

/// Executes graph subroutines classically while charging every quantum
/// query the modeled algorithms would have made. One instance owns its
/// generator and ledger, so runs are deterministic given (inputs, seed).
pub struct QuantumSim {
    pub model: CostModel,
    pub ledger: QueryLedger,
    rng: ChaCha8Rng,
    last_edge_search_queries: u64,
}

impl QuantumSim {
    pub fn new(model: CostModel) -> Self {
        QuantumSim {
            model,
            ledger: QueryLedger::default(),
            rng: ChaCha8Rng::seed_from_u64(model.seed),
            last_edge_search_queries: 0,
        }
    }

    /// Oracle queries charged by the per-vertex edge searches of the most
    /// recent edge-removal call, excluding the component-finding phase.
    pub fn last_edge_search_queries(&self) -> u64 {
        self.last_edge_search_queries
    }

    fn inject_failure(&mut self) -> bool {
        self.model.fail_prob > 0.0 && self.rng.gen_bool(self.model.fail_prob)
    }

    /// Unstructured search over `0..n`: evaluates the predicate on every
    /// item classically, charges the square-root query cost for the
    /// marked count found, and returns a uniformly random marked item
    /// (`None` when nothing is marked). An injected failure returns a
    /// uniformly random item regardless of marking.
    pub fn grover<F: FnMut(usize) -> bool>(
        &mut self,
        n: usize,
        mut predicate: F,
    ) -> SubroutineResult<Option<usize>> {
        assert!(n >= 1, "search space must be non-empty");
        let marked: Vec<usize> = (0..n).filter(|&i| predicate(i)).collect();
        self.ledger.classical_steps += n as u64;
        self.ledger.searches_attempted += 1;
        let queries = self.model.grover_queries(n as u64, marked.len() as u64);
        self.ledger.oracle_queries += queries;
        self.ledger.qram_query += queries * self.model.qram_query_cost(n as u64);

        if self.inject_failure() {
            self.ledger.searches_failed += 1;
            let item = self.rng.gen_range(0..n);
            return SubroutineResult {
                payload: Some(item),
                failed: true,
            };
        }
        let payload = if marked.is_empty() {
            None
        } else {
            Some(marked[self.rng.gen_range(0..marked.len())])
        };
        SubroutineResult::ok(payload)
    }

    /// Minimum finding by threshold descent: start from a random
    /// filter-passing item, then repeatedly search for a strict
    /// improvement, one charged search per round, until none exists.
    /// Returns the lowest-index item attaining the final key.
    pub fn qmin_find<K, F>(
        &mut self,
        n: usize,
        key: K,
        filter: F,
    ) -> SubroutineResult<Option<usize>>
    where
        K: Fn(usize) -> i64,
        F: Fn(usize) -> bool,
    {
        assert!(n >= 1, "search space must be non-empty");
        let mut failed = false;

        let init = self.grover(n, |i| filter(i));
        failed |= init.failed;
        let mut current = match init.payload {
            Some(i) => i,
            None => return SubroutineResult { payload: None, failed },
        };

        loop {
            let threshold = key(current);
            let improving = self.grover(n, |i| filter(i) && key(i) < threshold);
            failed |= improving.failed;
            match improving.payload {
                Some(i) => current = i,
                None => break,
            }
        }

        let final_key = key(current);
        let payload = (0..n)
            .find(|&i| filter(i) && key(i) == final_key)
            .or(Some(current));
        SubroutineResult { payload, failed }
    }

    /// Maximum matching with the phase-structured charge of the quantum
    /// matching algorithm: `ceil(sqrt(|X|))` phases, each costing
    /// `ceil(sqrt(|V||E|))`, with the squared log repetition factor. The
    /// matching itself is computed classically; an injected failure
    /// returns a truncated (non-maximum) matching, which the cover-based
    /// verifier is guaranteed to reject.
    pub fn q_matching(&mut self, g: &VariableValueGraph) -> SubroutineResult<Matching> {
        let (nx, nv, ne) = (
            g.var_count() as u64,
            g.val_count() as u64,
            g.edge_count() as u64,
        );
        self.ledger.qram_init += self.model.qram_init_cost(ne, nx + nv);
        self.ledger.searches_attempted += 1;
        let rep = self.model.repetitions(nv);
        let queries =
            ((nx as f64).sqrt().ceil() as u64) * (((nv * ne) as f64).sqrt().ceil() as u64) * rep * rep;
        self.ledger.oracle_queries += queries;
        self.ledger.qram_query += queries * self.model.qram_query_cost(nx + nv);

        let matching = max_matching_hk(g);
        if self.inject_failure() {
            self.ledger.searches_failed += 1;
            return SubroutineResult {
                payload: matching.truncated(),
                failed: true,
            };
        }
        SubroutineResult::ok(matching)
    }

    /// Strongly connected components by the search-accelerated depth
    /// traversal: the next undiscovered neighbor comes from an
    /// unstructured search over the vertex's out-list, and the back-link
    /// update from one minimum-finding run over the on-stack neighbors.
    /// Charges memory initialization for the graph, then per-vertex
    /// search costs.
    pub fn q_find_scc(&mut self, out_adj: &[Vec<usize>]) -> SubroutineResult<SccMap> {
        let n = out_adj.len() as u64;
        let m: u64 = out_adj.iter().map(|a| a.len() as u64).sum();
        self.ledger.qram_init += self.model.qram_init_cost(m, n.max(1));
        self.q_find_scc_inner(out_adj)
    }

    pub(crate) fn q_find_scc_inner(&mut self, out_adj: &[Vec<usize>]) -> SubroutineResult<SccMap> {
        let n = out_adj.len();
        let mut index: Vec<Option<usize>> = vec![None; n];
        let mut low = vec![0usize; n];
        let mut on_stack = vec![false; n];
        let mut stack: Vec<usize> = Vec::new();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0usize;
        let mut next_index = 0usize;
        let mut failed = false;

        struct Frame {
            v: usize,
            pending_child: Option<usize>,
        }

        for root in 0..n {
            if index[root].is_some() {
                continue;
            }
            let mut frames = vec![Frame {
                v: root,
                pending_child: None,
            }];
            index[root] = Some(next_index);
            low[root] = next_index;
            next_index += 1;
            stack.push(root);
            on_stack[root] = true;
            self.ledger.classical_steps += 1;

            while let Some(frame) = frames.last_mut() {
                let v = frame.v;
                if let Some(w) = frame.pending_child.take() {
                    low[v] = low[v].min(low[w]);
                }
                let degree = out_adj[v].len();

                // Search the out-list for an undiscovered neighbor.
                let next = if degree == 0 {
                    None
                } else {
                    let r = self.grover(degree, |i| index[out_adj[v][i]].is_none());
                    failed |= r.failed;
                    r.payload
                };

                match next {
                    Some(i) if index[out_adj[v][i]].is_none() => {
                        let w = out_adj[v][i];
                        index[w] = Some(next_index);
                        low[w] = next_index;
                        next_index += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        self.ledger.classical_steps += 1;
                        frames.last_mut().unwrap().pending_child = Some(w);
                        frames.push(Frame {
                            v: w,
                            pending_child: None,
                        });
                    }
                    _ => {
                        // No undiscovered neighbor (or a failure-corrupted
                        // pick): take the minimum discovery index among
                        // on-stack neighbors, then close the vertex.
                        if degree > 0 {
                            let r = self.qmin_find(
                                degree,
                                |i| index[out_adj[v][i]].map_or(i64::MAX, |x| x as i64),
                                |i| on_stack[out_adj[v][i]],
                            );
                            failed |= r.failed;
                            if let Some(i) = r.payload {
                                if let Some(ix) = index[out_adj[v][i]] {
                                    low[v] = low[v].min(ix);
                                }
                            }
                        }
                        if low[v] == index[v].unwrap() {
                            loop {
                                let u = stack.pop().expect("component stack underflow");
                                on_stack[u] = false;
                                comp[u] = count;
                                self.ledger.classical_steps += 1;
                                if u == v {
                                    break;
                                }
                            }
                            count += 1;
                        }
                        frames.pop();
                    }
                }
            }
        }

        SubroutineResult {
            payload: SccMap { comp, count },
            failed,
        }
    }

    /// The charged analog of the edge-removal pipeline: classical
    /// alternating-path marking (linear in its output), component finding
    /// as above, then one search over each variable vertex's incident
    /// edges charging `ceil(c*sqrt(deg * max(removals, 1)))` with the
    /// squared log factor. The payload equals the classical removal set
    /// whenever no failure was injected.
    pub fn q_remove_edges(
        &mut self,
        g: &VariableValueGraph,
        m: &Matching,
    ) -> Result<SubroutineResult<Vec<(usize, usize)>>, GraphError> {
        if m.size() != g.var_count() {
            return Err(GraphError::NotSaturating {
                expected: g.var_count(),
                got: m.size(),
            });
        }
        let (nx, nv, ne) = (
            g.var_count() as u64,
            g.val_count() as u64,
            g.edge_count() as u64,
        );
        self.ledger.qram_init += self.model.qram_init_cost(ne, nx + nv);

        let dg = direct_graph(g, m);
        let used_directed = find_simple_paths(&dg, m);
        self.ledger.classical_steps += used_directed.len() as u64;
        let used: std::collections::HashSet<(usize, usize)> = used_directed
            .into_iter()
            .map(|(u, w)| {
                if u < g.var_count() {
                    (u, w - g.var_count())
                } else {
                    (w, u - g.var_count())
                }
            })
            .collect();

        let scc = self.q_find_scc_inner(dg.out_adj());
        let removed = identify_edges(g, m, &used, &scc.payload);

        // Per-vertex searches for removable incident edges.
        let rep = self.model.repetitions(nv);
        self.last_edge_search_queries = 0;
        for x in 0..g.var_count() {
            let degree = g.degree(x) as u64;
            if degree == 0 {
                continue;
            }
            let removals_here = removed.iter().filter(|&&(v, _)| v == x).count() as u64;
            let base = self.model.grover_constant * ((degree * removals_here.max(1)) as f64).sqrt();
            let queries = (base.ceil() as u64) * rep * rep;
            self.ledger.searches_attempted += 1;
            self.ledger.oracle_queries += queries;
            self.ledger.qram_query += queries * self.model.qram_query_cost(nx + nv);
            self.last_edge_search_queries += queries;
        }

        Ok(SubroutineResult {
            payload: removed,
            failed: scc.failed,
        })
    }
}
