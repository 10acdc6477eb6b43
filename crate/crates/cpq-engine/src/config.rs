use cpq_core::BranchStrategy;
use cpq_sim::CostModel;
use cpq_walk::AlphaPolicy;

/// Which implementation backs the matching-based propagators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FilteringBackend {
    Classical,
    QuantumSim,
}

/// How simulated-quantum results are folded into the search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntegrationMode {
    /// Verified-or-fallback: every quantum matching is checked for
    /// maximality and recomputed classically on failure; edge removal
    /// stays classical. Results are correct with certainty.
    ExactLasVegas,
    /// Trust quantum payloads for at most this many subroutine calls,
    /// then switch to classical filtering.
    BoundedError(u64),
    /// Always trust quantum payloads; completeness is not guaranteed
    /// under failure injection.
    Heuristic,
}

/// The search driver.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    ClassicalDfs,
    QwalkFull,
    QwalkChunky(usize),
    BoundedDepth(usize),
}

#[derive(Clone, Debug)]
pub struct SolveConfig {
    pub backend: FilteringBackend,
    pub mode: IntegrationMode,
    pub search: SearchMode,
    pub alpha: AlphaPolicy,
    pub cost_model: CostModel,
    pub branch: BranchStrategy,
    /// Node budget: explored nodes for the depth-first driver, built
    /// tree nodes for the walk drivers.
    pub limit_nodes: usize,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            backend: FilteringBackend::Classical,
            mode: IntegrationMode::ExactLasVegas,
            search: SearchMode::ClassicalDfs,
            alpha: AlphaPolicy::DepthBound,
            cost_model: CostModel::exact(0),
            branch: BranchStrategy::Assignment,
            limit_nodes: 2_000_000,
        }
    }
}

impl SolveConfig {
    pub fn classical(seed: u64) -> Self {
        SolveConfig {
            cost_model: CostModel::exact(seed),
            ..SolveConfig::default()
        }
    }

    pub fn quantum_exact(seed: u64) -> Self {
        SolveConfig {
            backend: FilteringBackend::QuantumSim,
            cost_model: CostModel::exact(seed),
            ..SolveConfig::default()
        }
    }
}
