use crate::constraint::Constraint;
use crate::csp::Csp;
use crate::domain::{DomainTuple, Value, VarId};

/// Status flag attached to propagated domains: definitely infeasible,
/// definitely feasible, or indeterminate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Beta {
    Infeasible,
    Feasible,
    Unknown,
}

impl std::fmt::Display for Beta {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Beta::Infeasible => write!(f, "0"),
            Beta::Feasible => write!(f, "1"),
            Beta::Unknown => write!(f, "*"),
        }
    }
}

/// Filtered domains together with the node status.
#[derive(Clone, Debug, PartialEq)]
pub struct PropagationResult {
    pub domains: DomainTuple,
    pub beta: Beta,
}

/// Outcome of filtering one constraint: either proof of unsatisfiability,
/// or (possibly reduced) domains with the removed pairs listed.
#[derive(Clone, Debug, PartialEq)]
pub enum FilterOutcome {
    Infeasible,
    Filtered {
        domains: DomainTuple,
        removed: Vec<(VarId, Value)>,
    },
}

impl FilterOutcome {
    pub fn unchanged(domains: &DomainTuple) -> Self {
        FilterOutcome::Filtered {
            domains: domains.clone(),
            removed: Vec::new(),
        }
    }
}

/// One filtering algorithm per constraint. Implementations range from a
/// pure satisfaction check on complete scopes up to matching-based domain
/// consistency; the search loop only relies on soundness.
pub trait FilterBank {
    fn filter(&mut self, constraint: &Constraint, domains: &DomainTuple) -> FilterOutcome;
}

/// The weakest sound bank: no pruning at all. A constraint reports
/// infeasible only once every variable in its scope is fixed and the
/// assignment violates it. This reproduces naive backtracking, where the
/// search tree is shaped purely by branching.
pub struct CheckingFilterBank;

impl FilterBank for CheckingFilterBank {
    fn filter(&mut self, constraint: &Constraint, domains: &DomainTuple) -> FilterOutcome {
        if constraint.fully_assigned(domains) && !constraint.check_singletons(domains) {
            return FilterOutcome::Infeasible;
        }
        FilterOutcome::unchanged(domains)
    }
}

/// Runs the propagation loop: repeatedly applies every constraint's
/// filter until a full pass changes nothing or some filter proves its
/// constraint unsatisfiable. On a clean fixpoint with all domains reduced
/// to singletons the status is `Feasible`.
///
/// `max_rounds` bounds the number of full passes; `None` runs to the
/// fixpoint (guaranteed to terminate since domains shrink monotonically).
/// A round-capped run that stops before the fixpoint reports `Unknown`.
pub fn propagate(
    csp: &Csp,
    domains: &DomainTuple,
    max_rounds: Option<u32>,
    bank: &mut dyn FilterBank,
) -> PropagationResult {
    let mut current = domains.clone();
    if current.has_empty_set() {
        return PropagationResult {
            domains: current,
            beta: Beta::Infeasible,
        };
    }
    let mut rounds = 0u32;
    let mut reached_fixpoint = false;
    loop {
        let mut changed = false;
        for c in &csp.constraints {
            match bank.filter(c, &current) {
                FilterOutcome::Infeasible => {
                    return PropagationResult {
                        domains: current,
                        beta: Beta::Infeasible,
                    };
                }
                FilterOutcome::Filtered { domains: next, .. } => {
                    if next != current {
                        if next.has_empty_set() {
                            return PropagationResult {
                                domains: next,
                                beta: Beta::Infeasible,
                            };
                        }
                        changed = true;
                        current = next;
                    }
                }
            }
        }
        rounds += 1;
        if !changed {
            reached_fixpoint = true;
            break;
        }
        if let Some(cap) = max_rounds {
            if rounds >= cap {
                break;
            }
        }
    }
    let beta = if reached_fixpoint && current.all_singletons() {
        Beta::Feasible
    } else {
        Beta::Unknown
    };
    PropagationResult {
        domains: current,
        beta,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn csp(domains: Vec<Vec<Value>>, constraints: Vec<Constraint>) -> Csp {
        Csp {
            variables: (0..domains.len()).map(|i| format!("x{}", i + 1)).collect(),
            domains: DomainTuple::new(domains),
            constraints,
        }
    }

    #[test]
    fn checking_bank_flags_violated_complete_scope() {
        let p = csp(
            vec![vec![1], vec![1]],
            vec![Constraint::AllDifferent { scope: vec![0, 1] }],
        );
        let r = propagate(&p, &p.domains.clone(), None, &mut CheckingFilterBank);
        assert_eq!(r.beta, Beta::Infeasible);
    }

    #[test]
    fn checking_bank_accepts_consistent_singletons() {
        let p = csp(
            vec![vec![1], vec![2]],
            vec![Constraint::AllDifferent { scope: vec![0, 1] }],
        );
        let r = propagate(&p, &p.domains.clone(), None, &mut CheckingFilterBank);
        assert_eq!(r.beta, Beta::Feasible);
    }

    #[test]
    fn checking_bank_leaves_partial_domains_alone() {
        let p = csp(
            vec![vec![1, 2], vec![1, 2], vec![1, 2]],
            vec![Constraint::AllDifferent {
                scope: vec![0, 1, 2],
            }],
        );
        let r = propagate(&p, &p.domains.clone(), None, &mut CheckingFilterBank);
        assert_eq!(r.beta, Beta::Unknown);
        assert_eq!(r.domains, p.domains);
    }
}
