use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use cpq_core::{parse_problem, problem_to_json, BranchStrategy};
use cpq_engine::{
    build_model, emit_report, roster_shipped_params, solve, solve_model, sudoku_clue_triple,
    sudoku_shipped_clues, tsp_shipped_costs, FilteringBackend, IntegrationMode, ModelParams,
    ModelSpec, ReportFormat, SearchMode, SolveConfig, SolveStatus,
};
use cpq_sim::CostModel;
use cpq_walk::AlphaPolicy;

#[derive(Parser)]
#[command(
    name = "cpq",
    about = "Constraint solver with interchangeable classical and simulated-quantum backends"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a problem file (JSON schema; see README).
    Solve {
        /// Path to the problem file.
        problem: PathBuf,
        #[command(flatten)]
        opts: SolveOpts,
    },
    /// Emit (or solve) one of the bundled models.
    Model {
        /// One of: sudoku, sudoku-triple, tsp, roster, roundrobin.
        name: String,
        /// Write the problem JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Solve the model and print the outcome instead of emitting it.
        #[arg(long)]
        solve: bool,
        /// For sudoku: emit a fully assigned consistent grid instead of
        /// the clue instance.
        #[arg(long)]
        generate: bool,
        #[command(flatten)]
        opts: SolveOpts,
    },
    /// Run the bundled models under both backends and print a charge
    /// comparison table.
    Bench {
        #[command(flatten)]
        opts: SolveOpts,
    },
}

#[derive(Args)]
struct SolveOpts {
    /// Filtering backend: classical | qsim.
    #[arg(long, default_value = "classical")]
    backend: String,
    /// Integration mode: exact | bounded:<k> | heuristic.
    #[arg(long, default_value = "exact")]
    mode: String,
    /// Search driver: dfs | qwalk | chunky:<chi> | depth:<l>.
    #[arg(long, default_value = "dfs")]
    search: String,
    /// Root weighting: L | resistance.
    #[arg(long, default_value = "L")]
    alpha: String,
    /// Injected failure probability per simulated search.
    #[arg(long, default_value_t = 0.0)]
    fail_prob: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report format: json | csv.
    #[arg(long, default_value = "json")]
    report: String,
    #[arg(long, default_value_t = 2_000_000)]
    limit_nodes: usize,
    /// Branching: assignment | twoway | split.
    #[arg(long, default_value = "assignment")]
    branch: String,
}

impl SolveOpts {
    fn config(&self) -> Result<SolveConfig, String> {
        let backend = match self.backend.as_str() {
            "classical" => FilteringBackend::Classical,
            "qsim" => FilteringBackend::QuantumSim,
            other => return Err(format!("unknown backend {other:?}")),
        };
        let mode = if self.mode == "exact" {
            IntegrationMode::ExactLasVegas
        } else if self.mode == "heuristic" {
            IntegrationMode::Heuristic
        } else if let Some(k) = self.mode.strip_prefix("bounded:") {
            IntegrationMode::BoundedError(k.parse().map_err(|_| "bad bounded:<k>")?)
        } else {
            return Err(format!("unknown mode {:?}", self.mode));
        };
        let search = if self.search == "dfs" {
            SearchMode::ClassicalDfs
        } else if self.search == "qwalk" {
            SearchMode::QwalkFull
        } else if let Some(chi) = self.search.strip_prefix("chunky:") {
            SearchMode::QwalkChunky(chi.parse().map_err(|_| "bad chunky:<chi>")?)
        } else if let Some(l) = self.search.strip_prefix("depth:") {
            SearchMode::BoundedDepth(l.parse().map_err(|_| "bad depth:<l>")?)
        } else {
            return Err(format!("unknown search {:?}", self.search));
        };
        let alpha = match self.alpha.as_str() {
            "L" => AlphaPolicy::DepthBound,
            "resistance" => AlphaPolicy::EffectiveResistance,
            other => return Err(format!("unknown alpha {other:?}")),
        };
        let branch = match self.branch.as_str() {
            "assignment" => BranchStrategy::Assignment,
            "twoway" => BranchStrategy::TwoWay,
            "split" => BranchStrategy::DomainSplit,
            other => return Err(format!("unknown branch strategy {other:?}")),
        };
        if !(0.0..1.0).contains(&self.fail_prob) {
            return Err("fail-prob must be in [0, 1)".into());
        }
        let mut cost_model = CostModel::exact(self.seed);
        cost_model.fail_prob = self.fail_prob;
        Ok(SolveConfig {
            backend,
            mode,
            search,
            alpha,
            cost_model,
            branch,
            limit_nodes: self.limit_nodes,
        })
    }

    fn format(&self) -> Result<ReportFormat, String> {
        match self.report.as_str() {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(format!("unknown report format {other:?}")),
        }
    }
}

fn named_model(name: &str) -> Result<ModelSpec, String> {
    let params = match name {
        "sudoku" => ModelParams::Sudoku {
            clues: sudoku_shipped_clues(),
        },
        "sudoku-triple" => ModelParams::Sudoku {
            clues: sudoku_clue_triple(),
        },
        "tsp" => ModelParams::Tsp {
            costs: tsp_shipped_costs(),
        },
        "roster" => roster_shipped_params(),
        "roundrobin" => ModelParams::RoundRobin { teams: 4 },
        other => return Err(format!("unknown model {other:?}")),
    };
    build_model(&params).map_err(|e| e.to_string())
}

fn run() -> Result<(), String> {
    match Cli::parse().command {
        Command::Solve { problem, opts } => {
            let text = std::fs::read_to_string(&problem)
                .map_err(|e| format!("{}: {e}", problem.display()))?;
            let csp = parse_problem(&text).map_err(|e| e.to_string())?;
            let report = solve(&csp, &opts.config()?);
            println!("{}", emit_report(&report, opts.format()?));
            Ok(())
        }
        Command::Model {
            name,
            out,
            solve: do_solve,
            generate,
            opts,
        } => {
            let spec = named_model(&name)?;
            if do_solve {
                let report = solve_model(&spec, &opts.config()?);
                println!("{}", emit_report(&report, opts.format()?));
                return Ok(());
            }
            let emitted = if generate {
                if !name.starts_with("sudoku") {
                    return Err("--generate applies to the sudoku models".into());
                }
                let report = solve_model(&spec, &opts.config()?);
                let SolveStatus::Sat { assignment } = &report.status else {
                    return Err("generation failed: instance did not solve".into());
                };
                let clues = assignment
                    .iter()
                    .enumerate()
                    .map(|(cell, &v)| (cell / 9 + 1, cell % 9 + 1, v))
                    .collect();
                let full =
                    build_model(&ModelParams::Sudoku { clues }).map_err(|e| e.to_string())?;
                problem_to_json(&full.csp)
            } else {
                problem_to_json(&spec.csp)
            };
            match out {
                Some(path) => std::fs::write(&path, emitted)
                    .map_err(|e| format!("{}: {e}", path.display()))?,
                None => println!("{emitted}"),
            }
            Ok(())
        }
        Command::Bench { opts } => {
            let base = opts.config()?;
            println!(
                "model,backend,status,nodes,oracle_queries,qram_init,qram_query,\
classical_steps,fallbacks"
            );
            for name in ["sudoku", "tsp", "roster", "roundrobin"] {
                let spec = named_model(name)?;
                for backend in [FilteringBackend::Classical, FilteringBackend::QuantumSim] {
                    let config = SolveConfig {
                        backend,
                        ..base.clone()
                    };
                    let report = solve_model(&spec, &config);
                    let status = match report.status {
                        SolveStatus::Sat { .. } => "sat",
                        SolveStatus::Unsat => "unsat",
                        SolveStatus::Unknown => "unknown",
                    };
                    let tag = match backend {
                        FilteringBackend::Classical => "classical",
                        FilteringBackend::QuantumSim => "qsim",
                    };
                    let l = report.ledger;
                    println!(
                        "{name},{tag},{status},{},{},{},{},{},{}",
                        report.nodes_explored,
                        l.oracle_queries,
                        l.qram_init,
                        l.qram_query,
                        l.classical_steps,
                        report.fallbacks
                    );
                }
            }
            Ok(())
        }
    }
}

fn main() {
    if let Err(message) = run() {
        eprintln!("error: {message}");
        std::process::exit(1);
    }
}
