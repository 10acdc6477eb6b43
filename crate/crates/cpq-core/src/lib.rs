//! Core constraint-satisfaction model: variables with finite integer
//! domains, a constraint vocabulary, the propagation fixpoint loop, and
//! branching operators for tree search.
//!
//! Filtering algorithms plug in through the [`FilterBank`] trait; this
//! crate ships only the naive satisfaction-checking bank. Matching-based
//! domain-consistency propagators live in the `cpq-filter` crate.

mod branch;
mod constraint;
mod csp;
mod domain;
mod propagate;

pub use branch::{branch, child_count, select_variable, BranchError, BranchStrategy};
pub use constraint::Constraint;
pub use csp::{parse_problem, problem_to_json, Csp, CspError};
pub use domain::{DomainTuple, Value, VarId};
pub use propagate::{propagate, Beta, CheckingFilterBank, FilterBank, FilterOutcome, PropagationResult};
