use std::collections::BTreeMap;

use crate::domain::{DomainTuple, Value, VarId};

/// A constraint over a subset of the CSP's variables.
///
/// The matching-based global constraints carry their own scopes; the
/// channeling constraints (`Inverse`, `Same`, `UsedBy`) relate two tuples
/// of variables. Unary and binary comparisons round out what the bundled
/// models need.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Constraint {
    /// All scoped variables take pairwise distinct values.
    AllDifferent { scope: Vec<VarId> },
    /// Pairwise distinct among variables not assigned 0; any number of
    /// variables may take 0.
    AllDifferentExcept0 { scope: Vec<VarId> },
    /// Each listed value `values[i]` occurs between `bounds[i].0` and
    /// `bounds[i].1` times among the scoped variables. Unlisted values are
    /// unconstrained.
    Gcc {
        scope: Vec<VarId>,
        values: Vec<Value>,
        bounds: Vec<(u32, u32)>,
    },
    /// `x_i = j ⇔ y_j = i` for all pairs `i ≠ j`, with values in `1..=n`.
    Inverse {
        scope_x: Vec<VarId>,
        scope_y: Vec<VarId>,
    },
    /// The multisets of values assigned to the two scopes are equal.
    Same {
        scope_x: Vec<VarId>,
        scope_y: Vec<VarId>,
    },
    /// The multiset of values assigned to `scope_y` is contained in the
    /// multiset assigned to `scope_x` (`|scope_y| <= |scope_x|`).
    UsedBy {
        scope_x: Vec<VarId>,
        scope_y: Vec<VarId>,
    },
    UnaryEq { var: VarId, value: Value },
    UnaryNeq { var: VarId, value: Value },
    UnaryLeq { var: VarId, value: Value },
    /// `left < right`.
    BinaryLt { left: VarId, right: VarId },
    /// `left != right`.
    BinaryNeq { left: VarId, right: VarId },
}

impl Constraint {
    /// All variables the constraint mentions, in declaration order,
    /// without duplicates.
    pub fn scope(&self) -> Vec<VarId> {
        let mut vars = match self {
            Constraint::AllDifferent { scope }
            | Constraint::AllDifferentExcept0 { scope }
            | Constraint::Gcc { scope, .. } => scope.clone(),
            Constraint::Inverse { scope_x, scope_y }
            | Constraint::Same { scope_x, scope_y }
            | Constraint::UsedBy { scope_x, scope_y } => {
                let mut v = scope_x.clone();
                v.extend_from_slice(scope_y);
                v
            }
            Constraint::UnaryEq { var, .. }
            | Constraint::UnaryNeq { var, .. }
            | Constraint::UnaryLeq { var, .. } => vec![*var],
            Constraint::BinaryLt { left, right } | Constraint::BinaryNeq { left, right } => {
                vec![*left, *right]
            }
        };
        let mut seen = std::collections::HashSet::new();
        vars.retain(|v| seen.insert(*v));
        vars
    }

    /// A short lowercase tag naming the constraint kind.
    pub fn kind_name(&self) -> &'static str {
        match self {
            Constraint::AllDifferent { .. } => "alldifferent",
            Constraint::AllDifferentExcept0 { .. } => "alldifferent_except_0",
            Constraint::Gcc { .. } => "gcc",
            Constraint::Inverse { .. } => "inverse",
            Constraint::Same { .. } => "same",
            Constraint::UsedBy { .. } => "usedby",
            Constraint::UnaryEq { .. } => "unary_eq",
            Constraint::UnaryNeq { .. } => "unary_neq",
            Constraint::UnaryLeq { .. } => "unary_leq",
            Constraint::BinaryLt { .. } => "binary_lt",
            Constraint::BinaryNeq { .. } => "binary_neq",
        }
    }

    /// Evaluates the constraint on a complete assignment (one value per
    /// CSP variable, indexed by `VarId`).
    pub fn check(&self, assignment: &[Value]) -> bool {
        match self {
            Constraint::AllDifferent { scope } => {
                let mut seen = std::collections::HashSet::new();
                scope.iter().all(|&v| seen.insert(assignment[v]))
            }
            Constraint::AllDifferentExcept0 { scope } => {
                let mut seen = std::collections::HashSet::new();
                scope
                    .iter()
                    .map(|&v| assignment[v])
                    .filter(|&x| x != 0)
                    .all(|x| seen.insert(x))
            }
            Constraint::Gcc {
                scope,
                values,
                bounds,
            } => {
                let mut counts: BTreeMap<Value, u32> = BTreeMap::new();
                for &v in scope {
                    *counts.entry(assignment[v]).or_insert(0) += 1;
                }
                values.iter().zip(bounds.iter()).all(|(&val, &(lo, hi))| {
                    let c = counts.get(&val).copied().unwrap_or(0);
                    lo <= c && c <= hi
                })
            }
            Constraint::Inverse { scope_x, scope_y } => {
                let n = scope_x.len() as Value;
                for i in 1..=n {
                    for j in 1..=n {
                        if i == j {
                            continue;
                        }
                        let xi = assignment[scope_x[(i - 1) as usize]];
                        let yj = assignment[scope_y[(j - 1) as usize]];
                        if (xi == j) != (yj == i) {
                            return false;
                        }
                    }
                }
                true
            }
            Constraint::Same { scope_x, scope_y } => {
                multiset(scope_x, assignment) == multiset(scope_y, assignment)
            }
            Constraint::UsedBy { scope_x, scope_y } => {
                let xs = multiset(scope_x, assignment);
                let ys = multiset(scope_y, assignment);
                ys.iter()
                    .all(|(v, c)| xs.get(v).copied().unwrap_or(0) >= *c)
            }
            Constraint::UnaryEq { var, value } => assignment[*var] == *value,
            Constraint::UnaryNeq { var, value } => assignment[*var] != *value,
            Constraint::UnaryLeq { var, value } => assignment[*var] <= *value,
            Constraint::BinaryLt { left, right } => assignment[*left] < assignment[*right],
            Constraint::BinaryNeq { left, right } => assignment[*left] != assignment[*right],
        }
    }

    /// Cheap domain reduction for the unary and binary comparison
    /// constraints. Returns removed pairs, or `None` if some domain
    /// emptied. Global constraints are handled by dedicated propagators
    /// and are untouched here.
    pub fn bounds_filter(&self, domains: &mut DomainTuple) -> Option<Vec<(VarId, Value)>> {
        let mut removed = Vec::new();
        match self {
            Constraint::UnaryEq { var, value } => {
                for v in domains.get(*var).to_vec() {
                    if v != *value {
                        domains.remove(*var, v);
                        removed.push((*var, v));
                    }
                }
            }
            Constraint::UnaryNeq { var, value } => {
                if domains.remove(*var, *value) {
                    removed.push((*var, *value));
                }
            }
            Constraint::UnaryLeq { var, value } => {
                for v in domains.get(*var).to_vec() {
                    if v > *value {
                        domains.remove(*var, v);
                        removed.push((*var, v));
                    }
                }
            }
            Constraint::BinaryLt { left, right } => {
                let max_r = domains.get(*right).last().copied();
                let min_l = domains.get(*left).first().copied();
                if let Some(max_r) = max_r {
                    for v in domains.get(*left).to_vec() {
                        if v >= max_r {
                            domains.remove(*left, v);
                            removed.push((*left, v));
                        }
                    }
                }
                if let Some(min_l) = min_l {
                    for v in domains.get(*right).to_vec() {
                        if v <= min_l {
                            domains.remove(*right, v);
                            removed.push((*right, v));
                        }
                    }
                }
            }
            Constraint::BinaryNeq { left, right } => {
                if let [only] = domains.get(*left) {
                    let only = *only;
                    if domains.remove(*right, only) {
                        removed.push((*right, only));
                    }
                }
                if let [only] = domains.get(*right) {
                    let only = *only;
                    if domains.remove(*left, only) {
                        removed.push((*left, only));
                    }
                }
            }
            _ => {}
        }
        if removed.iter().any(|&(v, _)| domains.get(v).is_empty()) {
            None
        } else {
            Some(removed)
        }
    }

    /// True if every scoped domain is a singleton, i.e. the constraint can
    /// be decided outright.
    pub fn fully_assigned(&self, domains: &DomainTuple) -> bool {
        self.scope().iter().all(|&v| domains.get(v).len() == 1)
    }

    /// Decides the constraint on all-singleton scoped domains.
    pub fn check_singletons(&self, domains: &DomainTuple) -> bool {
        let assignment: Vec<Value> = (0..domains.len())
            .map(|v| domains.get(v).first().copied().unwrap_or(0))
            .collect();
        self.check(&assignment)
    }
}

fn multiset(scope: &[VarId], assignment: &[Value]) -> BTreeMap<Value, u32> {
    let mut m = BTreeMap::new();
    for &v in scope {
        *m.entry(assignment[v]).or_insert(0) += 1;
    }
    m
}
