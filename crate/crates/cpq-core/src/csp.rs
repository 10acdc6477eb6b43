use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constraint::Constraint;
use crate::domain::{DomainTuple, Value, VarId};

/// A constraint satisfaction problem: named variables with finite integer
/// domains and a list of constraints over them.
#[derive(Clone, Debug, PartialEq)]
pub struct Csp {
    pub variables: Vec<String>,
    pub domains: DomainTuple,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Error)]
pub enum CspError {
    #[error("malformed problem file: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("duplicate variable name {0:?}")]
    DuplicateVariable(String),
    #[error("variable {0:?} has an empty domain")]
    EmptyDomain(String),
    #[error("constraint {kind} references undeclared variable {name:?}")]
    UnknownVariable { kind: String, name: String },
    #[error("unknown constraint kind {0:?}")]
    UnknownKind(String),
    #[error("constraint {kind} expected {expected} scope variables, got {got}")]
    ScopeArity {
        kind: String,
        expected: String,
        got: usize,
    },
    #[error("gcc bounds must satisfy lo <= hi, got [{0}, {1}]")]
    BadGccBounds(u32, u32),
    #[error("gcc needs one bound pair per value ({values} values, {bounds} bounds)")]
    GccShape { values: usize, bounds: usize },
    #[error("constraint {0} is missing field {1:?}")]
    MissingField(String, &'static str),
    #[error("assignment has {got} values for {expected} variables")]
    AssignmentLength { expected: usize, got: usize },
}

impl Csp {
    pub fn var_count(&self) -> usize {
        self.variables.len()
    }

    pub fn var_index(&self, name: &str) -> Option<VarId> {
        self.variables.iter().position(|v| v == name)
    }

    /// True iff `assignment` (one value per variable) satisfies every
    /// constraint. `Same` compares multisets for equality; `UsedBy` tests
    /// multiset containment.
    pub fn check_assignment(&self, assignment: &[Value]) -> Result<bool, CspError> {
        if assignment.len() != self.variables.len() {
            return Err(CspError::AssignmentLength {
                expected: self.variables.len(),
                got: assignment.len(),
            });
        }
        Ok(self.constraints.iter().all(|c| c.check(assignment)))
    }
}

// The JSON problem schema. Field names here are normative for the CLI.
#[derive(Serialize, Deserialize)]
struct ProblemFile {
    variables: Vec<VariableDecl>,
    constraints: Vec<ConstraintDecl>,
}

#[derive(Serialize, Deserialize)]
struct VariableDecl {
    name: String,
    domain: Vec<Value>,
}

#[derive(Serialize, Deserialize)]
struct ConstraintDecl {
    kind: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    scope: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    scope_x: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    scope_y: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    values: Vec<Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    bounds: Vec<(u32, u32)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    value: Option<Value>,
}

/// Parses and validates a JSON problem file.
pub fn parse_problem(text: &str) -> Result<Csp, CspError> {
    let file: ProblemFile = serde_json::from_str(text)?;
    let mut names: Vec<String> = Vec::with_capacity(file.variables.len());
    let mut sets = Vec::with_capacity(file.variables.len());
    for decl in &file.variables {
        if names.contains(&decl.name) {
            return Err(CspError::DuplicateVariable(decl.name.clone()));
        }
        if decl.domain.is_empty() {
            return Err(CspError::EmptyDomain(decl.name.clone()));
        }
        names.push(decl.name.clone());
        sets.push(decl.domain.clone());
    }
    let domains = DomainTuple::new(sets);

    let resolve = |kind: &str, scope: &[String]| -> Result<Vec<VarId>, CspError> {
        scope
            .iter()
            .map(|n| {
                names
                    .iter()
                    .position(|v| v == n)
                    .ok_or_else(|| CspError::UnknownVariable {
                        kind: kind.to_string(),
                        name: n.clone(),
                    })
            })
            .collect()
    };

    let mut constraints = Vec::with_capacity(file.constraints.len());
    for decl in &file.constraints {
        let kind = decl.kind.as_str();
        let scope = resolve(kind, &decl.scope)?;
        let scope_x = resolve(kind, &decl.scope_x)?;
        let scope_y = resolve(kind, &decl.scope_y)?;
        let value = |field: &'static str| {
            decl.value
                .ok_or(CspError::MissingField(kind.to_string(), field))
        };
        let unary = |got: usize| -> Result<VarId, CspError> {
            if scope.len() == 1 {
                Ok(scope[0])
            } else {
                Err(CspError::ScopeArity {
                    kind: kind.to_string(),
                    expected: "1".into(),
                    got,
                })
            }
        };
        let c = match kind {
            "alldifferent" => Constraint::AllDifferent { scope },
            "alldifferent_except_0" => Constraint::AllDifferentExcept0 { scope },
            "gcc" => {
                if decl.values.len() != decl.bounds.len() {
                    return Err(CspError::GccShape {
                        values: decl.values.len(),
                        bounds: decl.bounds.len(),
                    });
                }
                for &(lo, hi) in &decl.bounds {
                    if lo > hi {
                        return Err(CspError::BadGccBounds(lo, hi));
                    }
                }
                Constraint::Gcc {
                    scope,
                    values: decl.values.clone(),
                    bounds: decl.bounds.clone(),
                }
            }
            "inverse" | "same" | "usedby" => {
                let arity_ok = match kind {
                    "usedby" => scope_y.len() <= scope_x.len(),
                    _ => scope_x.len() == scope_y.len(),
                };
                if !arity_ok || scope_x.is_empty() {
                    return Err(CspError::ScopeArity {
                        kind: kind.to_string(),
                        expected: "matching scope_x/scope_y lengths".into(),
                        got: scope_y.len(),
                    });
                }
                match kind {
                    "inverse" => Constraint::Inverse { scope_x, scope_y },
                    "same" => Constraint::Same { scope_x, scope_y },
                    _ => Constraint::UsedBy { scope_x, scope_y },
                }
            }
            "unary_eq" => Constraint::UnaryEq {
                var: unary(decl.scope.len())?,
                value: value("value")?,
            },
            "unary_neq" => Constraint::UnaryNeq {
                var: unary(decl.scope.len())?,
                value: value("value")?,
            },
            "unary_leq" => Constraint::UnaryLeq {
                var: unary(decl.scope.len())?,
                value: value("value")?,
            },
            "binary_lt" | "binary_neq" => {
                if scope.len() != 2 {
                    return Err(CspError::ScopeArity {
                        kind: kind.to_string(),
                        expected: "2".into(),
                        got: scope.len(),
                    });
                }
                if kind == "binary_lt" {
                    Constraint::BinaryLt {
                        left: scope[0],
                        right: scope[1],
                    }
                } else {
                    Constraint::BinaryNeq {
                        left: scope[0],
                        right: scope[1],
                    }
                }
            }
            other => return Err(CspError::UnknownKind(other.to_string())),
        };
        constraints.push(c);
    }

    Ok(Csp {
        variables: names,
        domains,
        constraints,
    })
}

/// Serializes a CSP back into the JSON problem schema. Parsing the output
/// reproduces the CSP exactly.
pub fn problem_to_json(csp: &Csp) -> String {
    let name = |v: VarId| csp.variables[v].clone();
    let names = |vs: &[VarId]| vs.iter().map(|&v| name(v)).collect::<Vec<_>>();
    let mut constraints = Vec::new();
    for c in &csp.constraints {
        let mut decl = ConstraintDecl {
            kind: c.kind_name().to_string(),
            scope: Vec::new(),
            scope_x: Vec::new(),
            scope_y: Vec::new(),
            values: Vec::new(),
            bounds: Vec::new(),
            value: None,
        };
        match c {
            Constraint::AllDifferent { scope } | Constraint::AllDifferentExcept0 { scope } => {
                decl.scope = names(scope);
            }
            Constraint::Gcc {
                scope,
                values,
                bounds,
            } => {
                decl.scope = names(scope);
                decl.values = values.clone();
                decl.bounds = bounds.clone();
            }
            Constraint::Inverse { scope_x, scope_y }
            | Constraint::Same { scope_x, scope_y }
            | Constraint::UsedBy { scope_x, scope_y } => {
                decl.scope_x = names(scope_x);
                decl.scope_y = names(scope_y);
            }
            Constraint::UnaryEq { var, value }
            | Constraint::UnaryNeq { var, value }
            | Constraint::UnaryLeq { var, value } => {
                decl.scope = vec![name(*var)];
                decl.value = Some(*value);
            }
            Constraint::BinaryLt { left, right } | Constraint::BinaryNeq { left, right } => {
                decl.scope = vec![name(*left), name(*right)];
            }
        }
        constraints.push(decl);
    }
    let file = ProblemFile {
        variables: csp
            .variables
            .iter()
            .enumerate()
            .map(|(i, n)| VariableDecl {
                name: n.clone(),
                domain: csp.domains.get(i).to_vec(),
            })
            .collect(),
        constraints,
    };
    serde_json::to_string_pretty(&file).expect("problem serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_small_problem() {
        let text = r#"{
            "variables": [
                {"name": "x1", "domain": [1, 2]},
                {"name": "x2", "domain": [1, 2]},
                {"name": "x3", "domain": [1, 2]}
            ],
            "constraints": [
                {"kind": "alldifferent", "scope": ["x1", "x2", "x3"]}
            ]
        }"#;
        let csp = parse_problem(text).unwrap();
        assert_eq!(csp.var_count(), 3);
        assert_eq!(csp.constraints.len(), 1);
        assert_eq!(csp.domains.get(2), &[1, 2]);
    }

    #[test]
    fn rejects_undeclared_scope_variable() {
        let text = r#"{
            "variables": [{"name": "x1", "domain": [1]}],
            "constraints": [{"kind": "alldifferent", "scope": ["x9"]}]
        }"#;
        assert!(matches!(
            parse_problem(text),
            Err(CspError::UnknownVariable { .. })
        ));
    }

    #[test]
    fn rejects_unknown_kind_and_bad_gcc() {
        let unknown = r#"{
            "variables": [{"name": "x", "domain": [1]}],
            "constraints": [{"kind": "mystery", "scope": ["x"]}]
        }"#;
        assert!(matches!(
            parse_problem(unknown),
            Err(CspError::UnknownKind(_))
        ));
        let bad_gcc = r#"{
            "variables": [{"name": "x", "domain": [1]}],
            "constraints": [{"kind": "gcc", "scope": ["x"], "values": [1], "bounds": [[2, 1]]}]
        }"#;
        assert!(matches!(
            parse_problem(bad_gcc),
            Err(CspError::BadGccBounds(2, 1))
        ));
    }

    #[test]
    fn round_trips_through_json() {
        let text = r#"{
            "variables": [
                {"name": "a", "domain": [1, 2, 3]},
                {"name": "b", "domain": [1, 2, 3]}
            ],
            "constraints": [
                {"kind": "binary_lt", "scope": ["a", "b"]},
                {"kind": "unary_eq", "scope": ["b"], "value": 3}
            ]
        }"#;
        let csp = parse_problem(text).unwrap();
        let emitted = problem_to_json(&csp);
        let reparsed = parse_problem(&emitted).unwrap();
        assert_eq!(csp, reparsed);
    }
}
