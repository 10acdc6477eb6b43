use thiserror::Error;

use cpq_core::{Constraint, Csp, DomainTuple, Value, VarId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("sudoku clue ({0},{1})={2} is out of range")]
    BadClue(usize, usize, Value),
    #[error("two clues disagree at cell ({0},{1})")]
    ClashingClues(usize, usize),
    #[error("tour cost matrix must be square, got {0}x{1}")]
    BadCostMatrix(usize, usize),
    #[error("round-robin needs an even team count, got {0}")]
    OddTeams(usize),
    #[error("roster demands {0} assignments per day but only {1} nurses exist")]
    Overcommitted(u32, usize),
}

/// A sum of per-variable value costs, evaluated on complete assignments.
#[derive(Clone, Debug)]
pub struct Objective {
    /// `(variable, table)` terms; the cost of assigning value `v` is
    /// `table[v - 1]`.
    pub tables: Vec<(VarId, Vec<i64>)>,
}

impl Objective {
    pub fn evaluate(&self, assignment: &[Value]) -> i64 {
        self.tables
            .iter()
            .map(|(var, table)| table[(assignment[*var] - 1) as usize])
            .sum()
    }
}

/// A CSP plus an optional objective to minimize.
#[derive(Clone, Debug)]
pub struct ModelSpec {
    pub csp: Csp,
    pub objective: Option<Objective>,
}

/// Parameters of the bundled problem families.
#[derive(Clone, Debug)]
pub enum ModelParams {
    /// 9x9 grid; clues are 1-indexed `(row, col, value)` fixings.
    Sudoku { clues: Vec<(usize, usize, Value)> },
    /// Symmetric tour problem over an `n x n` cost matrix.
    Tsp { costs: Vec<Vec<i64>> },
    /// `nurses x days` shift grid with exact per-day demands for the
    /// morning/afternoon/evening shifts and a bounded number of days off
    /// per nurse.
    Roster {
        nurses: usize,
        days: usize,
        demand: (u32, u32, u32),
        off_days: (u32, u32),
    },
    /// Single round-robin schedule for an even number of teams.
    RoundRobin { teams: usize },
}

/// Builds one of the bundled CP models.
pub fn build_model(params: &ModelParams) -> Result<ModelSpec, ModelError> {
    match params {
        ModelParams::Sudoku { clues } => sudoku(clues),
        ModelParams::Tsp { costs } => tsp(costs),
        ModelParams::Roster {
            nurses,
            days,
            demand,
            off_days,
        } => roster(*nurses, *days, *demand, *off_days),
        ModelParams::RoundRobin { teams } => round_robin(*teams),
    }
}

/// 81 cell variables over 1..9 with a difference constraint per row,
/// column, and box, plus one unary fixing per clue.
fn sudoku(clues: &[(usize, usize, Value)]) -> Result<ModelSpec, ModelError> {
    let var = |r: usize, c: usize| (r - 1) * 9 + (c - 1);
    let mut seen = std::collections::HashMap::new();
    for &(r, c, v) in clues {
        if !(1..=9).contains(&r) || !(1..=9).contains(&c) || !(1..=9).contains(&v) {
            return Err(ModelError::BadClue(r, c, v));
        }
        if *seen.entry((r, c)).or_insert(v) != v {
            return Err(ModelError::ClashingClues(r, c));
        }
    }
    let variables = (1..=9)
        .flat_map(|r| (1..=9).map(move |c| format!("x{r}{c}")))
        .collect();
    let domains = DomainTuple::new(vec![(1..=9).collect(); 81]);
    let mut constraints: Vec<Constraint> = clues
        .iter()
        .map(|&(r, c, v)| Constraint::UnaryEq {
            var: var(r, c),
            value: v,
        })
        .collect();
    for r in 1..=9 {
        constraints.push(Constraint::AllDifferent {
            scope: (1..=9).map(|c| var(r, c)).collect(),
        });
    }
    for c in 1..=9 {
        constraints.push(Constraint::AllDifferent {
            scope: (1..=9).map(|r| var(r, c)).collect(),
        });
    }
    for br in [1, 4, 7] {
        for bc in [1, 4, 7] {
            constraints.push(Constraint::AllDifferent {
                scope: (0..3)
                    .flat_map(|i| (0..3).map(move |j| var(br + i, bc + j)))
                    .collect(),
            });
        }
    }
    Ok(ModelSpec {
        csp: Csp {
            variables,
            domains,
            constraints,
        },
        objective: None,
    })
}

/// Successor/predecessor tour model: `x_i` is visited right after city
/// `i` and `y_i` right before it, channeled by the inverse constraint,
/// with both families pairwise distinct and `x_1 < y_1` ruling out each
/// tour's reversal. Self-loops are excluded by the domains. The objective
/// sums the successor costs.
fn tsp(costs: &[Vec<i64>]) -> Result<ModelSpec, ModelError> {
    let n = costs.len();
    if costs.iter().any(|row| row.len() != n) {
        return Err(ModelError::BadCostMatrix(
            n,
            costs.iter().map(Vec::len).max().unwrap_or(0),
        ));
    }
    let variables: Vec<String> = (1..=n)
        .map(|i| format!("x{i}"))
        .chain((1..=n).map(|i| format!("y{i}")))
        .collect();
    let domain = |i: usize| -> Vec<Value> {
        (1..=n as Value).filter(|&v| v != i as Value).collect()
    };
    let domains = DomainTuple::new((1..=n).map(domain).chain((1..=n).map(domain)).collect());
    let scope_x: Vec<VarId> = (0..n).collect();
    let scope_y: Vec<VarId> = (n..2 * n).collect();
    let constraints = vec![
        Constraint::Inverse {
            scope_x: scope_x.clone(),
            scope_y: scope_y.clone(),
        },
        Constraint::AllDifferent { scope: scope_x },
        Constraint::AllDifferent { scope: scope_y },
        Constraint::BinaryLt { left: 0, right: n },
    ];
    let objective = Objective {
        tables: (0..n).map(|i| (i, costs[i].clone())).collect(),
    };
    Ok(ModelSpec {
        csp: Csp {
            variables,
            domains,
            constraints,
        },
        objective: Some(objective),
    })
}

/// Shift values used by the roster model.
pub const SHIFT_MORNING: Value = 1;
pub const SHIFT_AFTERNOON: Value = 2;
pub const SHIFT_EVENING: Value = 3;
pub const SHIFT_OFF: Value = 4;

/// One variable per (nurse, day) over the four shift values. Each day
/// carries an exact cardinality on the three working shifts; each nurse
/// carries an off-day cardinality window.
fn roster(
    nurses: usize,
    days: usize,
    demand: (u32, u32, u32),
    off_days: (u32, u32),
) -> Result<ModelSpec, ModelError> {
    let total_demand = demand.0 + demand.1 + demand.2;
    if total_demand > nurses as u32 {
        return Err(ModelError::Overcommitted(total_demand, nurses));
    }
    let var = |i: usize, d: usize| i * days + d;
    let variables = (0..nurses)
        .flat_map(|i| (0..days).map(move |d| format!("s{}d{}", i + 1, d + 1)))
        .collect();
    let domains = DomainTuple::new(vec![
        vec![SHIFT_MORNING, SHIFT_AFTERNOON, SHIFT_EVENING, SHIFT_OFF];
        nurses * days
    ]);
    let mut constraints = Vec::new();
    for d in 0..days {
        constraints.push(Constraint::Gcc {
            scope: (0..nurses).map(|i| var(i, d)).collect(),
            values: vec![SHIFT_MORNING, SHIFT_AFTERNOON, SHIFT_EVENING],
            bounds: vec![
                (demand.0, demand.0),
                (demand.1, demand.1),
                (demand.2, demand.2),
            ],
        });
    }
    for i in 0..nurses {
        constraints.push(Constraint::Gcc {
            scope: (0..days).map(|d| var(i, d)).collect(),
            values: vec![SHIFT_OFF],
            bounds: vec![off_days],
        });
    }
    Ok(ModelSpec {
        csp: Csp {
            variables,
            domains,
            constraints,
        },
        objective: None,
    })
}

/// Opponent model: `x_{i,t}` is the team that `i` plays in slot `t`.
/// Each slot's opponent tuple channels with itself (if `i` plays `j`
/// then `j` plays `i`), self-play is excluded by the domains, and each
/// team faces every other team exactly once across the slots.
fn round_robin(teams: usize) -> Result<ModelSpec, ModelError> {
    if teams == 0 || teams % 2 != 0 {
        return Err(ModelError::OddTeams(teams));
    }
    let slots = teams - 1;
    let var = |i: usize, t: usize| i * slots + t;
    let variables = (1..=teams)
        .flat_map(|i| (1..=slots).map(move |t| format!("x{i}s{t}")))
        .collect();
    let domains = DomainTuple::new(
        (1..=teams)
            .flat_map(|i| {
                std::iter::repeat(
                    (1..=teams as Value)
                        .filter(|&v| v != i as Value)
                        .collect::<Vec<_>>(),
                )
                .take(slots)
            })
            .collect(),
    );
    let mut constraints = Vec::new();
    for t in 0..slots {
        let slot_scope: Vec<VarId> = (0..teams).map(|i| var(i, t)).collect();
        constraints.push(Constraint::Inverse {
            scope_x: slot_scope.clone(),
            scope_y: slot_scope,
        });
    }
    for i in 0..teams {
        constraints.push(Constraint::AllDifferent {
            scope: (0..slots).map(|t| var(i, t)).collect(),
        });
    }
    Ok(ModelSpec {
        csp: Csp {
            variables,
            domains,
            constraints,
        },
        objective: None,
    })
}

/// The three fixings used throughout as the minimal clue set.
pub fn sudoku_clue_triple() -> Vec<(usize, usize, Value)> {
    vec![(3, 3, 1), (3, 5, 2), (2, 6, 3)]
}

/// A 30-clue instance (containing the clue triple) of a fully consistent
/// grid.
pub fn sudoku_shipped_clues() -> Vec<(usize, usize, Value)> {
    vec![
        (1, 2, 6),
        (1, 5, 5),
        (1, 7, 1),
        (2, 4, 1),
        (2, 6, 3),
        (2, 9, 5),
        (3, 3, 1),
        (3, 4, 8),
        (3, 5, 2),
        (3, 6, 6),
        (3, 9, 3),
        (4, 6, 9),
        (4, 7, 3),
        (4, 9, 8),
        (5, 8, 2),
        (6, 1, 8),
        (6, 2, 9),
        (6, 7, 6),
        (6, 9, 1),
        (7, 2, 1),
        (8, 2, 8),
        (8, 5, 6),
        (8, 6, 7),
        (8, 7, 2),
        (8, 8, 1),
        (8, 9, 4),
        (9, 4, 2),
        (9, 5, 8),
        (9, 7, 5),
        (9, 8, 3),
    ]
}

/// Four-city cost matrix whose cheapest tour ties the cheapest non-tour
/// decomposition, keeping the model optimum equal to the tour optimum.
pub fn tsp_shipped_costs() -> Vec<Vec<i64>> {
    vec![
        vec![0, 1, 10, 1],
        vec![1, 0, 1, 10],
        vec![10, 1, 0, 1],
        vec![1, 10, 1, 0],
    ]
}

pub fn roster_shipped_params() -> ModelParams {
    ModelParams::Roster {
        nurses: 4,
        days: 5,
        demand: (1, 1, 1),
        off_days: (1, 2),
    }
}
