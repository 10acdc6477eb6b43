//! Global-constraint propagators: matching-based filtering for the
//! difference and cardinality constraints, channeling consistency for
//! `inverse`, and an exhaustive-support reference filter used as the
//! correctness oracle in tests.

mod alldiff;
mod bank;
mod brute;
mod gcc;
mod inverse;
mod kernel;

pub use alldiff::{
    filter_alldifferent, filter_alldifferent_except0, filter_alldifferent_except0_with,
    filter_alldifferent_with,
};
pub use bank::DomainConsistencyBank;
pub use brute::{brute_force_dc, BruteForceError};
pub use gcc::{filter_gcc, filter_gcc_with};
pub use inverse::filter_inverse;
pub use kernel::{ClassicalKernel, MatchingKernel};
