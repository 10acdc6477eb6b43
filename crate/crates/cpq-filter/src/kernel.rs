use cpq_graph::{max_matching_hk, remove_edges_classical, Matching, VariableValueGraph};

/// The two graph subroutines every matching-based propagator is built
/// from. Swapping the implementation swaps the execution backend without
/// touching the filtering logic; the removal step is only invoked with a
/// matching that covers all variable vertices.
pub trait MatchingKernel {
    fn max_matching(&mut self, g: &VariableValueGraph) -> Matching;
    fn remove_edges(&mut self, g: &VariableValueGraph, m: &Matching) -> Vec<(usize, usize)>;
}

/// Hopcroft-Karp plus the linear-time removal pipeline.
pub struct ClassicalKernel;

impl MatchingKernel for ClassicalKernel {
    fn max_matching(&mut self, g: &VariableValueGraph) -> Matching {
        max_matching_hk(g)
    }

    fn remove_edges(&mut self, g: &VariableValueGraph, m: &Matching) -> Vec<(usize, usize)> {
        remove_edges_classical(g, m).expect("kernel invoked with a saturating matching")
    }
}
