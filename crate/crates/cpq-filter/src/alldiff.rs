use cpq_core::{DomainTuple, FilterOutcome, Value, VarId};
use cpq_graph::{build_value_graph, VariableValueGraph};

use crate::kernel::{ClassicalKernel, MatchingKernel};

/// Domain-consistency filtering for pairwise difference: satisfiable iff
/// a matching covers every scoped variable, after which every edge in no
/// maximum matching is pruned.
pub fn filter_alldifferent_with(
    domains: &DomainTuple,
    scope: &[VarId],
    kernel: &mut dyn MatchingKernel,
) -> FilterOutcome {
    let g = match build_value_graph(domains, scope) {
        Ok(g) => g,
        Err(_) => return FilterOutcome::Infeasible,
    };
    let m = kernel.max_matching(&g);
    if m.size() < g.var_count() {
        return FilterOutcome::Infeasible;
    }
    let mut out = domains.clone();
    let mut removed = Vec::new();
    for (x, j) in kernel.remove_edges(&g, &m) {
        let var = scope[x];
        let value = g.value_of(j);
        if out.remove(var, value) {
            removed.push((var, value));
        }
    }
    FilterOutcome::Filtered {
        domains: out,
        removed,
    }
}

pub fn filter_alldifferent(domains: &DomainTuple, scope: &[VarId]) -> FilterOutcome {
    filter_alldifferent_with(domains, scope, &mut ClassicalKernel)
}

/// Builds the difference graph with the exception value 0 expanded into
/// one reserved value vertex per scoped variable, so any number of
/// variables can take 0 simultaneously. Reserved vertices make their
/// zero edges exchangeable into any maximum matching, hence 0 is never
/// pruned from a domain containing it.
fn build_except0_graph(domains: &DomainTuple, scope: &[VarId]) -> Option<VariableValueGraph> {
    let mut values: Vec<Value> = Vec::new();
    for &v in scope {
        if domains.get(v).is_empty() {
            return None;
        }
        values.extend(domains.get(v).iter().copied().filter(|&d| d != 0));
    }
    values.sort_unstable();
    values.dedup();
    let shared = values.len();
    let mut all_values = values.clone();
    all_values.extend(std::iter::repeat(0).take(scope.len()));
    let var_adj = scope
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let mut adj: Vec<usize> = domains
                .get(v)
                .iter()
                .filter(|&&d| d != 0)
                .map(|d| values.binary_search(d).expect("indexed above"))
                .collect();
            if domains.contains(v, 0) {
                adj.push(shared + i);
            }
            adj
        })
        .collect();
    Some(VariableValueGraph::from_adjacency(var_adj, all_values))
}

/// Filtering for pairwise difference among the variables not assigned 0.
pub fn filter_alldifferent_except0_with(
    domains: &DomainTuple,
    scope: &[VarId],
    kernel: &mut dyn MatchingKernel,
) -> FilterOutcome {
    let g = match build_except0_graph(domains, scope) {
        Some(g) => g,
        None => return FilterOutcome::Infeasible,
    };
    let m = kernel.max_matching(&g);
    if m.size() < g.var_count() {
        return FilterOutcome::Infeasible;
    }
    let mut out = domains.clone();
    let mut removed = Vec::new();
    for (x, j) in kernel.remove_edges(&g, &m) {
        let value = g.value_of(j);
        debug_assert_ne!(value, 0, "reserved zero edges are always exchangeable");
        if value == 0 {
            continue;
        }
        let var = scope[x];
        if out.remove(var, value) {
            removed.push((var, value));
        }
    }
    FilterOutcome::Filtered {
        domains: out,
        removed,
    }
}

pub fn filter_alldifferent_except0(domains: &DomainTuple, scope: &[VarId]) -> FilterOutcome {
    filter_alldifferent_except0_with(domains, scope, &mut ClassicalKernel)
}
