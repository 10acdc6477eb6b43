use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use cpq_core::Value;
use cpq_sim::QueryLedger;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SolveStatus {
    Sat { assignment: Vec<Value> },
    Unsat,
    Unknown,
}

/// Everything a solve run reports: outcome, exploration counters, the
/// charged-cost ledger, and per-constraint-kind filter call counts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub status: SolveStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub objective: Option<i64>,
    pub nodes_explored: u64,
    pub ledger: QueryLedger,
    pub filter_invocations: BTreeMap<String, u64>,
    pub quantum_calls: u64,
    pub fallbacks: u64,
    pub seed: u64,
    pub wall_ms: f64,
}

impl SolveReport {
    pub fn is_sat(&self) -> bool {
        matches!(self.status, SolveStatus::Sat { .. })
    }

    pub fn assignment(&self) -> Option<&[Value]> {
        match &self.status {
            SolveStatus::Sat { assignment } => Some(assignment),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

/// Fixed column order of the CSV schema, version 1.
pub const CSV_HEADER: &str = "status,objective,nodes_explored,oracle_queries,qram_init,\
qram_query,classical_steps,searches_attempted,searches_failed,walk_calls,quantum_calls,\
fallbacks,seed,wall_ms";

/// Serializes a report. JSON round-trips losslessly; CSV uses the fixed
/// header above with one data row.
pub fn emit_report(report: &SolveReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            serde_json::to_string_pretty(report).expect("report serialization cannot fail")
        }
        ReportFormat::Csv => {
            let status = match &report.status {
                SolveStatus::Sat { .. } => "sat",
                SolveStatus::Unsat => "unsat",
                SolveStatus::Unknown => "unknown",
            };
            let objective = report
                .objective
                .map(|o| o.to_string())
                .unwrap_or_default();
            let l = &report.ledger;
            format!(
                "{CSV_HEADER}\n{status},{objective},{},{},{},{},{},{},{},{},{},{},{},{:.3}",
                report.nodes_explored,
                l.oracle_queries,
                l.qram_init,
                l.qram_query,
                l.classical_steps,
                l.searches_attempted,
                l.searches_failed,
                l.walk_calls,
                report.quantum_calls,
                report.fallbacks,
                report.seed,
                report.wall_ms,
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SolveReport {
        SolveReport {
            status: SolveStatus::Sat {
                assignment: vec![1, 2, 3],
            },
            objective: Some(7),
            nodes_explored: 42,
            ledger: QueryLedger {
                oracle_queries: 10,
                qram_init: 20,
                qram_query: 30,
                classical_steps: 40,
                searches_attempted: 5,
                searches_failed: 1,
                walk_calls: 6,
            },
            filter_invocations: [("alldifferent".to_string(), 9u64)].into_iter().collect(),
            quantum_calls: 3,
            fallbacks: 1,
            seed: 11,
            wall_ms: 1.25,
        }
    }

    #[test]
    fn json_round_trips() {
        let r = sample();
        let text = emit_report(&r, ReportFormat::Json);
        let back: SolveReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn csv_has_fixed_header_and_one_row() {
        let r = sample();
        let text = emit_report(&r, ReportFormat::Csv);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        let row = lines.next().unwrap();
        assert!(row.starts_with("sat,7,42,10,20,30,40,5,1,6,3,1,11,"));
        assert_eq!(lines.next(), None);
    }
}
