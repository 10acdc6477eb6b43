use std::collections::HashSet;

use thiserror::Error;

use cpq_core::{Constraint, DomainTuple, FilterOutcome, Value};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BruteForceError {
    #[error("scoped assignment space of size {0} exceeds the enumeration budget")]
    BudgetExceeded(u128),
}

const ENUMERATION_BUDGET: u128 = 10_000_000;

/// Reference domain-consistency filter by exhaustive support search: a
/// pair `(variable, value)` survives iff some complete assignment of the
/// constraint's scope through it satisfies the constraint. Exponential in
/// the scope, usable only as a test oracle at small sizes.
pub fn brute_force_dc(
    domains: &DomainTuple,
    constraint: &Constraint,
) -> Result<FilterOutcome, BruteForceError> {
    let scope = constraint.scope();
    let space: u128 = scope
        .iter()
        .fold(1u128, |acc, &v| acc.saturating_mul(domains.get(v).len() as u128));
    if space > ENUMERATION_BUDGET {
        return Err(BruteForceError::BudgetExceeded(space));
    }
    if scope.iter().any(|&v| domains.get(v).is_empty()) {
        return Ok(FilterOutcome::Infeasible);
    }

    let mut supported: HashSet<(usize, Value)> = HashSet::new();
    let mut scratch = vec![0 as Value; domains.len()];
    let mut odometer = vec![0usize; scope.len()];
    loop {
        for (slot, &var) in scope.iter().enumerate() {
            scratch[var] = domains.get(var)[odometer[slot]];
        }
        if constraint.check(&scratch) {
            for &var in &scope {
                supported.insert((var, scratch[var]));
            }
        }
        // Advance the odometer.
        let mut slot = 0;
        loop {
            if slot == scope.len() {
                break;
            }
            odometer[slot] += 1;
            if odometer[slot] < domains.get(scope[slot]).len() {
                break;
            }
            odometer[slot] = 0;
            slot += 1;
        }
        if slot == scope.len() {
            break;
        }
    }

    let mut out = domains.clone();
    let mut removed = Vec::new();
    for &var in &scope {
        for v in domains.get(var).to_vec() {
            if !supported.contains(&(var, v)) {
                out.remove(var, v);
                removed.push((var, v));
            }
        }
        if out.get(var).is_empty() {
            return Ok(FilterOutcome::Infeasible);
        }
    }
    Ok(FilterOutcome::Filtered {
        domains: out,
        removed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pigeonhole_is_infeasible() {
        let d = DomainTuple::new(vec![vec![1, 2], vec![1, 2], vec![1, 2]]);
        let c = Constraint::AllDifferent {
            scope: vec![0, 1, 2],
        };
        assert_eq!(brute_force_dc(&d, &c), Ok(FilterOutcome::Infeasible));
    }

    #[test]
    fn consistent_singletons_are_untouched() {
        let d = DomainTuple::new(vec![vec![1], vec![2]]);
        let c = Constraint::AllDifferent { scope: vec![0, 1] };
        match brute_force_dc(&d, &c).unwrap() {
            FilterOutcome::Filtered { domains, removed } => {
                assert!(removed.is_empty());
                assert_eq!(domains, d);
            }
            other => panic!("unexpected outcome {other:?}"),
        }
    }

    #[test]
    fn budget_is_enforced() {
        let d = DomainTuple::new(vec![(0..100).collect::<Vec<i64>>(); 6]);
        let c = Constraint::AllDifferent {
            scope: (0..6).collect(),
        };
        assert!(matches!(
            brute_force_dc(&d, &c),
            Err(BruteForceError::BudgetExceeded(_))
        ));
    }
}
