use thiserror::Error;

use crate::domain::{DomainTuple, VarId};

/// How children are generated from a node's domains.
///
/// Variable selection is smallest-domain-first (among non-singletons),
/// ties broken by lowest variable index; values are taken in ascending
/// order. Every strategy partitions the selected variable's domain, so
/// any assignment consistent with the parent is consistent with exactly
/// one child.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BranchStrategy {
    /// One child per value of the selected variable.
    Assignment,
    /// Two children: `x = d` and `x != d`, with `d` the smallest value.
    TwoWay,
    /// Two children: `x <= d` and `x > d`, split at the middle value.
    DomainSplit,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BranchError {
    #[error("cannot branch: all domains are singletons")]
    AllSingleton,
}

/// The variable the strategies branch on, if any.
pub fn select_variable(domains: &DomainTuple) -> Option<VarId> {
    (0..domains.len())
        .filter(|&v| domains.get(v).len() > 1)
        .min_by_key(|&v| domains.get(v).len())
}

/// Number of children branching would generate, without generating them.
pub fn child_count(domains: &DomainTuple, strategy: BranchStrategy) -> usize {
    match select_variable(domains) {
        None => 0,
        Some(var) => match strategy {
            BranchStrategy::Assignment => domains.get(var).len(),
            BranchStrategy::TwoWay | BranchStrategy::DomainSplit => 2,
        },
    }
}

/// Generates the child domain tuples for a node.
pub fn branch(
    domains: &DomainTuple,
    strategy: BranchStrategy,
) -> Result<Vec<DomainTuple>, BranchError> {
    let var = select_variable(domains).ok_or(BranchError::AllSingleton)?;
    let values = domains.get(var).to_vec();
    let children = match strategy {
        BranchStrategy::Assignment => values
            .iter()
            .map(|&d| {
                let mut child = domains.clone();
                child.assign(var, d);
                child
            })
            .collect(),
        BranchStrategy::TwoWay => {
            let d = values[0];
            let mut eq = domains.clone();
            eq.assign(var, d);
            let mut neq = domains.clone();
            neq.assign_set(var, values[1..].to_vec());
            vec![eq, neq]
        }
        BranchStrategy::DomainSplit => {
            let mid = (values.len() - 1) / 2;
            let d = values[mid];
            let mut low = domains.clone();
            low.assign_set(var, values.iter().copied().filter(|&v| v <= d).collect());
            let mut high = domains.clone();
            high.assign_set(var, values.iter().copied().filter(|&v| v > d).collect());
            vec![low, high]
        }
    };
    Ok(children)
}
