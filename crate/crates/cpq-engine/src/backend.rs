use cpq_filter::MatchingKernel;
use cpq_graph::{
    max_matching_hk, remove_edges_classical, verify_matching_maximum, Matching,
    VariableValueGraph,
};
use cpq_sim::{CostModel, QuantumSim, SubroutineResult};

use crate::config::IntegrationMode;

/// Verified-or-fallback composition: run the fallible subroutine, accept
/// its payload if the verifier passes, otherwise recompute classically.
/// The result is always correct; the flag reports whether the fallback
/// ran.
pub fn las_vegas_filter<T>(
    quantum: impl FnOnce() -> SubroutineResult<T>,
    verify: impl FnOnce(&T) -> bool,
    classical: impl FnOnce() -> T,
) -> (T, bool) {
    let attempt = quantum();
    if verify(&attempt.payload) {
        (attempt.payload, false)
    } else {
        (classical(), true)
    }
}

/// Matching kernel backed by the charged-cost simulator, integrating its
/// payloads per the configured mode. Tracks how many quantum subroutine
/// calls were made and how often the exact mode fell back.
pub struct QuantumKernel {
    pub sim: QuantumSim,
    mode: IntegrationMode,
    pub quantum_calls: u64,
    pub fallbacks: u64,
}

impl QuantumKernel {
    pub fn new(model: CostModel, mode: IntegrationMode) -> Self {
        QuantumKernel {
            sim: QuantumSim::new(model),
            mode,
            quantum_calls: 0,
            fallbacks: 0,
        }
    }

    fn budget_left(&self) -> bool {
        match self.mode {
            IntegrationMode::BoundedError(maximum) => self.quantum_calls < maximum,
            _ => true,
        }
    }
}

impl MatchingKernel for QuantumKernel {
    fn max_matching(&mut self, g: &VariableValueGraph) -> Matching {
        match self.mode {
            IntegrationMode::ExactLasVegas => {
                self.quantum_calls += 1;
                let attempt = self.sim.q_matching(g);
                let (matching, fell_back) = las_vegas_filter(
                    move || attempt,
                    |m| verify_matching_maximum(g, m).unwrap_or(false),
                    || {
                        // Classical recomputation billed at the
                        // phase-per-edge rate.
                        let cost = g.edge_count() as u64
                            * ((g.var_count() as f64).sqrt().ceil() as u64).max(1);
                        self.sim.ledger.classical_steps += cost;
                        max_matching_hk(g)
                    },
                );
                if fell_back {
                    self.fallbacks += 1;
                }
                matching
            }
            IntegrationMode::BoundedError(_) => {
                if self.budget_left() {
                    self.quantum_calls += 1;
                    self.sim.q_matching(g).payload
                } else {
                    self.sim.ledger.classical_steps += g.edge_count() as u64;
                    max_matching_hk(g)
                }
            }
            IntegrationMode::Heuristic => {
                self.quantum_calls += 1;
                self.sim.q_matching(g).payload
            }
        }
    }

    fn remove_edges(&mut self, g: &VariableValueGraph, m: &Matching) -> Vec<(usize, usize)> {
        let classical = |sim: &mut QuantumSim| {
            sim.ledger.classical_steps += g.edge_count() as u64;
            remove_edges_classical(g, m).expect("saturating matching")
        };
        match self.mode {
            // The removal pipeline has no efficient failure indicator, so
            // the exact mode keeps it classical.
            IntegrationMode::ExactLasVegas => classical(&mut self.sim),
            IntegrationMode::BoundedError(_) => {
                if self.budget_left() {
                    self.quantum_calls += 1;
                    self.sim.q_remove_edges(g, m).expect("saturating matching").payload
                } else {
                    classical(&mut self.sim)
                }
            }
            IntegrationMode::Heuristic => {
                self.quantum_calls += 1;
                self.sim.q_remove_edges(g, m).expect("saturating matching").payload
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use cpq_core::DomainTuple;
    use cpq_graph::build_value_graph;

    fn worked_example() -> VariableValueGraph {
        let d = DomainTuple::new(vec![vec![1, 2], vec![1, 2], vec![2, 3, 4]]);
        build_value_graph(&d, &[0, 1, 2]).unwrap()
    }

    #[test]
    fn exact_mode_never_falls_back_without_failures() {
        let g = worked_example();
        let mut k = QuantumKernel::new(CostModel::exact(1), IntegrationMode::ExactLasVegas);
        let m = k.max_matching(&g);
        assert_eq!(m.size(), 3);
        assert_eq!(k.fallbacks, 0);
    }

    #[test]
    fn exact_mode_always_recovers_under_forced_failure() {
        let g = worked_example();
        let mut k = QuantumKernel::new(
            CostModel::with_fail_prob(0.999999, 2),
            IntegrationMode::ExactLasVegas,
        );
        for _ in 0..10 {
            let m = k.max_matching(&g);
            assert_eq!(m.size(), 3);
        }
        assert_eq!(k.fallbacks, 10);
    }

    #[test]
    fn bounded_mode_respects_its_budget() {
        let g = worked_example();
        let mut k = QuantumKernel::new(CostModel::exact(3), IntegrationMode::BoundedError(2));
        for _ in 0..5 {
            k.max_matching(&g);
        }
        assert_eq!(k.quantum_calls, 2);
    }

    #[test]
    fn las_vegas_frequency_tracks_fail_rate() {
        let g = worked_example();
        let p = 0.1;
        let trials = 10_000;
        let mut k =
            QuantumKernel::new(CostModel::with_fail_prob(p, 4), IntegrationMode::ExactLasVegas);
        for _ in 0..trials {
            let m = k.max_matching(&g);
            assert_eq!(m.size(), 3);
        }
        let freq = k.fallbacks as f64 / trials as f64;
        let sigma = (p * (1.0 - p) / trials as f64).sqrt();
        assert!((freq - p).abs() <= 3.0 * sigma, "fallback frequency {freq}");
    }
}
