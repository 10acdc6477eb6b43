use std::collections::BTreeMap;
use std::time::Instant;

use cpq_core::{branch, propagate, Beta, Constraint, Csp, DomainTuple, FilterBank, FilterOutcome, Value};
use cpq_filter::{ClassicalKernel, DomainConsistencyBank};
use cpq_sim::QueryLedger;
use cpq_walk::{
    bounded_depth_search, build_tree, chunky_search, find_marked, NodeId, SearchTree,
    MAX_DENSE_NODES,
};

use crate::backend::QuantumKernel;
use crate::config::{FilteringBackend, SearchMode, SolveConfig};
use crate::models::{ModelSpec, Objective};
use crate::report::{SolveReport, SolveStatus};

/// Filter dispatch with per-kind invocation counting.
struct CountingBank<B> {
    inner: B,
    counts: BTreeMap<String, u64>,
}

impl<B: FilterBank> FilterBank for CountingBank<B> {
    fn filter(&mut self, constraint: &Constraint, domains: &DomainTuple) -> FilterOutcome {
        *self
            .counts
            .entry(constraint.kind_name().to_string())
            .or_insert(0) += 1;
        self.inner.filter(constraint, domains)
    }
}

enum EngineBank {
    Classical(CountingBank<DomainConsistencyBank<ClassicalKernel>>),
    Quantum(CountingBank<DomainConsistencyBank<QuantumKernel>>),
}

impl EngineBank {
    fn new(config: &SolveConfig) -> Self {
        match config.backend {
            FilteringBackend::Classical => EngineBank::Classical(CountingBank {
                inner: DomainConsistencyBank::classical(),
                counts: BTreeMap::new(),
            }),
            FilteringBackend::QuantumSim => EngineBank::Quantum(CountingBank {
                inner: DomainConsistencyBank::new(QuantumKernel::new(
                    config.cost_model,
                    config.mode,
                )),
                counts: BTreeMap::new(),
            }),
        }
    }

    fn as_filter(&mut self) -> &mut dyn FilterBank {
        match self {
            EngineBank::Classical(b) => b,
            EngineBank::Quantum(b) => b,
        }
    }

    fn counts(&self) -> BTreeMap<String, u64> {
        match self {
            EngineBank::Classical(b) => b.counts.clone(),
            EngineBank::Quantum(b) => b.counts.clone(),
        }
    }

    fn drain_quantum(&mut self) -> (QueryLedger, u64, u64) {
        match self {
            EngineBank::Classical(_) => (QueryLedger::default(), 0, 0),
            EngineBank::Quantum(b) => {
                let kernel = b.inner.kernel_mut();
                (kernel.sim.ledger, kernel.quantum_calls, kernel.fallbacks)
            }
        }
    }
}

/// Solves a bare CSP under the configuration. Satisfying assignments are
/// always re-checked against every constraint before being reported.
pub fn solve(csp: &Csp, config: &SolveConfig) -> SolveReport {
    solve_model(
        &ModelSpec {
            csp: csp.clone(),
            objective: None,
        },
        config,
    )
}

/// Solves a model; a present objective is minimized by iterated
/// satisfiability with a tightening bound under the depth-first driver
/// (walk drivers report the first solution found and its cost).
pub fn solve_model(spec: &ModelSpec, config: &SolveConfig) -> SolveReport {
    let start = Instant::now();
    let mut bank = EngineBank::new(config);
    let mut walk_ledger = QueryLedger::default();
    let mut nodes_explored = 0u64;

    let (status, objective) = match config.search {
        SearchMode::ClassicalDfs => match &spec.objective {
            None => (
                dfs_sat(spec, config, &mut bank, &mut nodes_explored, &mut |_| true),
                None,
            ),
            Some(obj) => dfs_optimize(spec, config, &mut bank, &mut nodes_explored, obj),
        },
        _ => walk_solve(spec, config, &mut bank, &mut nodes_explored, &mut walk_ledger),
    };

    let filter_invocations = bank.counts();
    let (mut ledger, quantum_calls, fallbacks) = bank.drain_quantum();
    ledger.absorb(&walk_ledger);
    SolveReport {
        status,
        objective,
        nodes_explored,
        ledger,
        filter_invocations,
        quantum_calls,
        fallbacks,
        seed: config.cost_model.seed,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

/// Depth-first branch-and-infer search: propagate at each node, bail on
/// proven infeasibility, report the first verified solution accepted by
/// `leaf_ok`, branch otherwise.
fn dfs_sat(
    spec: &ModelSpec,
    config: &SolveConfig,
    bank: &mut EngineBank,
    nodes_explored: &mut u64,
    leaf_ok: &mut dyn FnMut(&[Value]) -> bool,
) -> SolveStatus {
    let csp = &spec.csp;
    let mut stack: Vec<DomainTuple> = vec![csp.domains.clone()];
    while let Some(domains) = stack.pop() {
        if *nodes_explored >= config.limit_nodes as u64 {
            return SolveStatus::Unknown;
        }
        *nodes_explored += 1;
        let result = propagate(csp, &domains, None, bank.as_filter());
        match result.beta {
            Beta::Infeasible => {}
            Beta::Feasible => {
                let assignment = result
                    .domains
                    .singleton_assignment()
                    .expect("feasible nodes have singleton domains");
                let valid = csp
                    .check_assignment(&assignment)
                    .expect("assignment covers all variables");
                if valid && leaf_ok(&assignment) {
                    return SolveStatus::Sat { assignment };
                }
            }
            Beta::Unknown => {
                let children = branch(&result.domains, config.branch)
                    .expect("indeterminate nodes are branchable");
                for child in children.into_iter().rev() {
                    stack.push(child);
                }
            }
        }
    }
    SolveStatus::Unsat
}

/// Iterated satisfiability with a strictly tightening objective bound:
/// re-solve demanding a cheaper solution until infeasible; the last
/// solution found is optimal.
fn dfs_optimize(
    spec: &ModelSpec,
    config: &SolveConfig,
    bank: &mut EngineBank,
    nodes_explored: &mut u64,
    objective: &Objective,
) -> (SolveStatus, Option<i64>) {
    let mut best: Option<(Vec<Value>, i64)> = None;
    loop {
        let bound = best.as_ref().map(|(_, cost)| *cost).unwrap_or(i64::MAX);
        let status = dfs_sat(spec, config, bank, nodes_explored, &mut |a| {
            objective.evaluate(a) < bound
        });
        match status {
            SolveStatus::Sat { assignment } => {
                let cost = objective.evaluate(&assignment);
                best = Some((assignment, cost));
            }
            SolveStatus::Unsat => break,
            SolveStatus::Unknown => return (SolveStatus::Unknown, None),
        }
    }
    match best {
        Some((assignment, cost)) => (SolveStatus::Sat { assignment }, Some(cost)),
        None => (SolveStatus::Unsat, None),
    }
}

fn walk_solve(
    spec: &ModelSpec,
    config: &SolveConfig,
    bank: &mut EngineBank,
    nodes_explored: &mut u64,
    ledger: &mut QueryLedger,
) -> (SolveStatus, Option<i64>) {
    let cap = config.limit_nodes.min(MAX_DENSE_NODES);
    let tree = match build_tree(&spec.csp, config.branch, bank.as_filter(), cap) {
        Ok(tree) => tree,
        Err(_) => return (SolveStatus::Unknown, None),
    };
    *nodes_explored = tree.len() as u64;
    let model = &config.cost_model;
    let found = match config.search {
        SearchMode::QwalkFull => find_marked(&tree, config.alpha, model, ledger),
        SearchMode::QwalkChunky(chi) => chunky_search(&tree, chi, config.alpha, model, ledger),
        SearchMode::BoundedDepth(l_star) => {
            bounded_depth_solve(&tree, l_star.max(1), model, ledger)
        }
        SearchMode::ClassicalDfs => unreachable!("handled by the caller"),
    };
    match found {
        Ok(Some(node)) => {
            let assignment = tree
                .assignment(node)
                .expect("marked nodes carry complete assignments");
            match spec.csp.check_assignment(&assignment) {
                Ok(true) => {
                    let cost = spec.objective.as_ref().map(|o| o.evaluate(&assignment));
                    (SolveStatus::Sat { assignment }, cost)
                }
                _ => (SolveStatus::Unknown, None),
            }
        }
        Ok(None) => (SolveStatus::Unsat, None),
        Err(_) => (SolveStatus::Unknown, None),
    }
}

/// Hybrid frontier exploration: repeatedly run the depth-bounded search
/// from the deepest pending frontier node until a solution appears or
/// the frontier drains.
fn bounded_depth_solve(
    tree: &SearchTree,
    l_star: usize,
    model: &cpq_sim::CostModel,
    ledger: &mut QueryLedger,
) -> Result<Option<NodeId>, cpq_walk::WalkError> {
    let mut stack = vec![tree.root()];
    while let Some(start) = stack.pop() {
        let (solutions, frontier) = bounded_depth_search(tree, start, l_star, model, ledger)?;
        if let Some(&node) = solutions.iter().min_by_key(|&&n| tree.dfs_rank(n)) {
            return Ok(Some(node));
        }
        let mut ordered = frontier;
        ordered.sort_by_key(|&n| tree.dfs_rank(n));
        for &f in ordered.iter().rev() {
            stack.push(f);
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::IntegrationMode;
    use cpq_core::parse_problem;

    fn pigeonhole() -> Csp {
        Csp {
            variables: (1..=3).map(|i| format!("x{i}")).collect(),
            domains: DomainTuple::new(vec![vec![1, 2]; 3]),
            constraints: vec![Constraint::AllDifferent {
                scope: vec![0, 1, 2],
            }],
        }
    }

    #[test]
    fn pigeonhole_is_unsat_at_the_root() {
        let report = solve(&pigeonhole(), &SolveConfig::classical(0));
        assert_eq!(report.status, SolveStatus::Unsat);
        assert_eq!(report.nodes_explored, 1);
    }

    #[test]
    fn small_alldifferent_solves_under_all_drivers() {
        let csp = parse_problem(
            r#"{
            "variables": [
                {"name": "a", "domain": [1, 2, 3]},
                {"name": "b", "domain": [1, 2, 3]},
                {"name": "c", "domain": [1, 2, 3]}
            ],
            "constraints": [{"kind": "alldifferent", "scope": ["a", "b", "c"]}]
        }"#,
        )
        .unwrap();
        let searches = [
            SearchMode::ClassicalDfs,
            SearchMode::QwalkFull,
            SearchMode::QwalkChunky(4),
            SearchMode::BoundedDepth(1),
        ];
        for search in searches {
            let config = SolveConfig {
                search,
                ..SolveConfig::classical(0)
            };
            let report = solve(&csp, &config);
            let assignment = report.assignment().unwrap_or_else(|| {
                panic!("{search:?} failed: {:?}", report.status)
            });
            assert!(csp.check_assignment(assignment).unwrap());
        }
    }

    #[test]
    fn classical_and_quantum_exact_agree() {
        let csp = pigeonhole();
        let classical = solve(&csp, &SolveConfig::classical(5));
        let quantum = solve(&csp, &SolveConfig::quantum_exact(5));
        assert_eq!(classical.status, quantum.status);
        assert_eq!(classical.nodes_explored, quantum.nodes_explored);
        assert!(quantum.ledger.oracle_queries > 0);
        assert_eq!(quantum.fallbacks, 0);
    }

    #[test]
    fn bounded_mode_budget_is_respected() {
        let spec = crate::models::build_model(&crate::models::ModelParams::Sudoku {
            clues: crate::models::sudoku_clue_triple(),
        })
        .unwrap();
        let config = SolveConfig {
            backend: FilteringBackend::QuantumSim,
            mode: IntegrationMode::BoundedError(7),
            ..SolveConfig::classical(1)
        };
        let report = solve_model(&spec, &config);
        assert!(report.quantum_calls <= 7);
        assert!(report.is_sat());
    }

    #[test]
    fn node_limit_reports_unknown() {
        let csp = parse_problem(
            r#"{
            "variables": [
                {"name": "a", "domain": [1, 2, 3, 4]},
                {"name": "b", "domain": [1, 2, 3, 4]},
                {"name": "c", "domain": [1, 2, 3, 4]},
                {"name": "d", "domain": [1, 2, 3, 4]}
            ],
            "constraints": []
        }"#,
        )
        .unwrap();
        let config = SolveConfig {
            limit_nodes: 2,
            search: SearchMode::ClassicalDfs,
            ..SolveConfig::classical(0)
        };
        // No constraints and a tiny budget: the driver cannot finish.
        let report = solve(&csp, &config);
        assert_eq!(report.status, SolveStatus::Unknown);
    }
}
