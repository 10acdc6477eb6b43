use std::collections::HashMap;

use cpq_core::{DomainTuple, FilterOutcome, Value, VarId};
use cpq_graph::{max_matching_hk, VariableValueGraph};

/// Filtering for the successor/predecessor biconditional
/// `x_i = j ⇔ y_j = i` over off-diagonal pairs `i != j`, values `1..=n`.
///
/// Candidates are first reduced by channeling consistency (a candidate on
/// one side needs its counterpart on the other; singletons force). For
/// disjoint scopes the filter then enforces full domain consistency
/// through the constraint's matching structure: a solution is exactly a
/// partial permutation of off-diagonal arcs `(i, j)` (meaning
/// `x_i = j` and `y_j = i`) whose uncovered rows can fall back to
/// `x_i = i` and uncovered columns to `y_j = j`. Support of a candidate
/// reduces to two one-sided coverage queries, each answered by a maximum
/// matching.
///
/// When the two scopes alias (self-channeling), solutions are involutions
/// and exact support would need matching in a general graph, so only the
/// channeling pass runs.
pub fn filter_inverse(
    domains: &DomainTuple,
    scope_x: &[VarId],
    scope_y: &[VarId],
) -> FilterOutcome {
    debug_assert_eq!(scope_x.len(), scope_y.len());
    let mut out = domains.clone();
    let mut removed: Vec<(VarId, Value)> = Vec::new();
    if channeling_pass(&mut out, &mut removed, scope_x, scope_y).is_err() {
        return FilterOutcome::Infeasible;
    }
    let disjoint = scope_x.iter().all(|v| !scope_y.contains(v));
    if disjoint {
        if permutation_support_pass(&mut out, &mut removed, scope_x, scope_y).is_err() {
            return FilterOutcome::Infeasible;
        }
    }
    FilterOutcome::Filtered {
        domains: out,
        removed,
    }
}

struct Unsatisfiable;

/// Channeling arc consistency to a fixpoint, plus removal of values
/// outside `1..=n`.
fn channeling_pass(
    out: &mut DomainTuple,
    removed: &mut Vec<(VarId, Value)>,
    scope_x: &[VarId],
    scope_y: &[VarId],
) -> Result<(), Unsatisfiable> {
    let n = scope_x.len();
    let mut remove = |out: &mut DomainTuple, removed: &mut Vec<(VarId, Value)>, var, value| {
        if out.remove(var, value) {
            removed.push((var, value));
        }
    };

    for &var in scope_x.iter().chain(scope_y.iter()) {
        for v in out.get(var).to_vec() {
            if v < 1 || v > n as Value {
                remove(out, removed, var, v);
            }
        }
        if out.get(var).is_empty() {
            return Err(Unsatisfiable);
        }
    }

    loop {
        let mut changed = false;
        for i in 1..=n as Value {
            for j in 1..=n as Value {
                if i == j {
                    continue;
                }
                let xi = scope_x[(i - 1) as usize];
                let yj = scope_y[(j - 1) as usize];

                if out.contains(xi, j) && !out.contains(yj, i) {
                    remove(out, removed, xi, j);
                    changed = true;
                }
                if out.contains(yj, i) && !out.contains(xi, j) {
                    remove(out, removed, yj, i);
                    changed = true;
                }
                if out.get(xi) == [j] {
                    for v in out.get(yj).to_vec() {
                        if v != i {
                            remove(out, removed, yj, v);
                            changed = true;
                        }
                    }
                }
                if out.get(yj) == [i] {
                    for v in out.get(xi).to_vec() {
                        if v != j {
                            remove(out, removed, xi, v);
                            changed = true;
                        }
                    }
                }
                if out.get(xi).is_empty() || out.get(yj).is_empty() {
                    return Err(Unsatisfiable);
                }
            }
        }
        if !changed {
            break;
        }
    }
    Ok(())
}

/// Exact support filtering on disjoint scopes via the partial-permutation
/// view. Rows without the `x_i = i` fallback and columns without the
/// `y_j = j` fallback must be covered by arcs; a candidate survives iff
/// some admissible arc set extends it on both sides (two one-sided
/// coverage checks suffice: a merge of the two witnesses covers both).
fn permutation_support_pass(
    out: &mut DomainTuple,
    removed: &mut Vec<(VarId, Value)>,
    scope_x: &[VarId],
    scope_y: &[VarId],
) -> Result<(), Unsatisfiable> {
    let n = scope_x.len();
    // Off-diagonal arcs admissible under the current domains.
    let arcs: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| {
                    i != j
                        && out.contains(scope_x[i], (j + 1) as Value)
                        && out.contains(scope_y[j], (i + 1) as Value)
                })
                .collect()
        })
        .collect();
    let diag_x: Vec<bool> = (0..n)
        .map(|i| out.contains(scope_x[i], (i + 1) as Value))
        .collect();
    let diag_y: Vec<bool> = (0..n)
        .map(|j| out.contains(scope_y[j], (j + 1) as Value))
        .collect();
    let rows_needing: Vec<usize> = (0..n).filter(|&i| !diag_x[i]).collect();
    let cols_needing: Vec<usize> = (0..n).filter(|&j| !diag_y[j]).collect();

    // Coverage query: can every target on one side be matched to a
    // distinct partner, avoiding a row/column and optionally consuming a
    // forced arc?
    let coverable = |targets: &[usize],
                     row_to_cols: bool,
                     banned_this_side: Option<usize>,
                     banned_other_side: Option<usize>|
     -> bool {
        let adj: Vec<Vec<usize>> = targets
            .iter()
            .filter(|&&t| Some(t) != banned_this_side)
            .map(|&t| {
                let partners: Vec<usize> = if row_to_cols {
                    arcs[t].clone()
                } else {
                    (0..n).filter(|&i| arcs[i].contains(&t)).collect()
                };
                partners
                    .into_iter()
                    .filter(|&p| Some(p) != banned_other_side)
                    .collect()
            })
            .collect();
        let wanted = adj.len();
        let g = VariableValueGraph::from_adjacency(adj, (0..n as Value).collect());
        max_matching_hk(&g).size() == wanted
    };

    if !coverable(&rows_needing, true, None, None) || !coverable(&cols_needing, false, None, None)
    {
        return Err(Unsatisfiable);
    }

    // Support of one off-diagonal arc, shared by the candidates
    // `x_{i} = j` and `y_{j} = i`.
    let mut arc_support: HashMap<(usize, usize), bool> = HashMap::new();
    let mut arc_supported = |i: usize, j: usize| -> bool {
        *arc_support.entry((i, j)).or_insert_with(|| {
            coverable(&rows_needing, true, Some(i), Some(j))
                && coverable(&cols_needing, false, Some(j), Some(i))
        })
    };

    let mut remove = |out: &mut DomainTuple, removed: &mut Vec<(VarId, Value)>, var, value| {
        if out.remove(var, value) {
            removed.push((var, value));
        }
    };

    for i in 0..n {
        for v in out.get(scope_x[i]).to_vec() {
            let j = (v - 1) as usize;
            let supported = if j == i {
                // Leaving row i uncovered requires covering everything
                // else without it.
                coverable(&rows_needing, true, None, None)
                    && coverable(&cols_needing, false, None, Some(i))
            } else if !arcs[i].contains(&j) {
                false
            } else {
                arc_supported(i, j)
            };
            if !supported {
                remove(out, removed, scope_x[i], v);
            }
        }
        if out.get(scope_x[i]).is_empty() {
            return Err(Unsatisfiable);
        }
    }
    for j in 0..n {
        for v in out.get(scope_y[j]).to_vec() {
            let i = (v - 1) as usize;
            let supported = if i == j {
                coverable(&cols_needing, false, None, None)
                    && coverable(&rows_needing, true, None, Some(j))
            } else if !arcs[i].contains(&j) {
                false
            } else {
                arc_supported(i, j)
            };
            if !supported {
                remove(out, removed, scope_y[j], v);
            }
        }
        if out.get(scope_y[j]).is_empty() {
            return Err(Unsatisfiable);
        }
    }
    Ok(())
}
