use cpq_core::{Constraint, DomainTuple, FilterBank, FilterOutcome};

use crate::alldiff::{filter_alldifferent_except0_with, filter_alldifferent_with};
use crate::gcc::filter_gcc_with;
use crate::inverse::filter_inverse;
use crate::kernel::{ClassicalKernel, MatchingKernel};

/// The full propagator dispatch: matching-based filtering for the global
/// constraints, channeling for `inverse`, bound reasoning for unary and
/// binary comparisons, and complete-assignment checks for the multiset
/// constraints (which have no propagator and act as checkers only).
pub struct DomainConsistencyBank<K: MatchingKernel> {
    kernel: K,
}

impl<K: MatchingKernel> DomainConsistencyBank<K> {
    pub fn new(kernel: K) -> Self {
        DomainConsistencyBank { kernel }
    }

    pub fn kernel_mut(&mut self) -> &mut K {
        &mut self.kernel
    }
}

impl DomainConsistencyBank<ClassicalKernel> {
    pub fn classical() -> Self {
        DomainConsistencyBank::new(ClassicalKernel)
    }
}

impl<K: MatchingKernel> FilterBank for DomainConsistencyBank<K> {
    fn filter(&mut self, constraint: &Constraint, domains: &DomainTuple) -> FilterOutcome {
        match constraint {
            Constraint::AllDifferent { scope } => {
                filter_alldifferent_with(domains, scope, &mut self.kernel)
            }
            Constraint::AllDifferentExcept0 { scope } => {
                filter_alldifferent_except0_with(domains, scope, &mut self.kernel)
            }
            Constraint::Gcc {
                scope,
                values,
                bounds,
            } => filter_gcc_with(domains, scope, values, bounds, &mut self.kernel),
            Constraint::Inverse { scope_x, scope_y } => {
                filter_inverse(domains, scope_x, scope_y)
            }
            Constraint::Same { .. } | Constraint::UsedBy { .. } => {
                if constraint.fully_assigned(domains) && !constraint.check_singletons(domains) {
                    FilterOutcome::Infeasible
                } else {
                    FilterOutcome::unchanged(domains)
                }
            }
            _ => {
                let mut out = domains.clone();
                match constraint.bounds_filter(&mut out) {
                    None => FilterOutcome::Infeasible,
                    Some(removed) => FilterOutcome::Filtered {
                        domains: out,
                        removed,
                    },
                }
            }
        }
    }
}
