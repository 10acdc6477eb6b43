//! Search orchestration over the constraint solver: selectable filtering
//! backends (classical or charged-cost simulated quantum), integration
//! modes (verified exact, bounded-error, heuristic), classical and
//! walk-based search drivers, bundled problem models, and report
//! emission.

mod backend;
mod config;
mod models;
mod report;
mod solve;

pub use backend::{las_vegas_filter, QuantumKernel};
pub use config::{FilteringBackend, IntegrationMode, SearchMode, SolveConfig};
pub use models::{
    build_model, roster_shipped_params, sudoku_clue_triple, sudoku_shipped_clues,
    tsp_shipped_costs, ModelError, ModelParams, ModelSpec, Objective, SHIFT_AFTERNOON,
    SHIFT_EVENING, SHIFT_MORNING, SHIFT_OFF,
};
pub use report::{emit_report, ReportFormat, SolveReport, SolveStatus, CSV_HEADER};
pub use solve::{solve, solve_model};
