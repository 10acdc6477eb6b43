use thiserror::Error;

use cpq_core::{DomainTuple, Value, VarId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("variable {0} has an empty domain")]
    EmptyScopedDomain(VarId),
    #[error("matching contains edge ({0}, {1}) absent from the graph")]
    EdgeNotInGraph(usize, usize),
    #[error("matching covers {got} of {expected} variable vertices")]
    NotSaturating { expected: usize, got: usize },
}

/// Bipartite variable-value graph: one vertex per scoped variable, one
/// vertex per value, one edge per (variable, candidate value) pair.
///
/// Value vertices are abstract indices; `values[j]` records the domain
/// value vertex `j` stands for. Duplicated value vertices (as used by the
/// cardinality-style propagators) share the same recorded value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableValueGraph {
    var_adj: Vec<Vec<usize>>,
    values: Vec<Value>,
    edge_count: usize,
}

impl VariableValueGraph {
    /// Assembles a graph from explicit adjacency lists. Lists are
    /// normalized to ascending order.
    pub fn from_adjacency(var_adj: Vec<Vec<usize>>, values: Vec<Value>) -> Self {
        let mut var_adj = var_adj;
        for adj in &mut var_adj {
            adj.sort_unstable();
            adj.dedup();
            debug_assert!(adj.iter().all(|&j| j < values.len()));
        }
        let edge_count = var_adj.iter().map(Vec::len).sum();
        VariableValueGraph {
            var_adj,
            values,
            edge_count,
        }
    }

    pub fn var_count(&self) -> usize {
        self.var_adj.len()
    }

    pub fn val_count(&self) -> usize {
        self.values.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.var_count() + self.val_count()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Value vertices adjacent to variable vertex `x`, ascending.
    pub fn adj(&self, x: usize) -> &[usize] {
        &self.var_adj[x]
    }

    pub fn degree(&self, x: usize) -> usize {
        self.var_adj[x].len()
    }

    /// The domain value that value vertex `j` represents.
    pub fn value_of(&self, j: usize) -> Value {
        self.values[j]
    }

    pub fn has_edge(&self, x: usize, j: usize) -> bool {
        self.var_adj[x].binary_search(&j).is_ok()
    }

    /// Adjacency from the value side, ascending.
    pub fn value_adj(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.val_count()];
        for (x, nbrs) in self.var_adj.iter().enumerate() {
            for &j in nbrs {
                adj[j].push(x);
            }
        }
        adj
    }
}

/// Builds the variable-value graph for `scope` under `domains`: one value
/// vertex per unique value across the scoped domains (ascending), one
/// edge per (variable, domain value).
pub fn build_value_graph(
    domains: &DomainTuple,
    scope: &[VarId],
) -> Result<VariableValueGraph, GraphError> {
    let mut values: Vec<Value> = Vec::new();
    for &v in scope {
        if domains.get(v).is_empty() {
            return Err(GraphError::EmptyScopedDomain(v));
        }
        values.extend_from_slice(domains.get(v));
    }
    values.sort_unstable();
    values.dedup();
    let var_adj = scope
        .iter()
        .map(|&v| {
            domains
                .get(v)
                .iter()
                .map(|val| values.binary_search(val).expect("value indexed above"))
                .collect()
        })
        .collect();
    Ok(VariableValueGraph::from_adjacency(var_adj, values))
}
