//! Simulated quantum subroutines under a charged query-cost model.
//!
//! Subroutines compute their answers classically and charge the query,
//! memory, and repetition costs the corresponding quantum algorithms
//! would incur, with optional failure injection reproducing their
//! bounded-error behavior. Costs land in a [`QueryLedger`] owned by the
//! [`QuantumSim`] instance.

mod model;
mod qubits;
mod sim;

pub use model::{ceil_log2, CostModel, QueryLedger, SubroutineResult};
pub use qubits::{estimate_node_qubits, NodeQubitParams};
pub use sim::QuantumSim;
