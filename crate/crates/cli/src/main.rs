//! `sap`: solve, generate, benchmark and verify seminar assignment instances.
//!
//! JSON goes to stdout, diagnostics to stderr. Exit codes: 0 success,
//! 2 bad input or parameters, 3 oracle guard exceeded, 4 bound or
//! property violation.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sap_core::bench::{run_bench, BenchParams};
use sap_core::checks;
use sap_core::generate::{generate, GenParams, SizeModel};
use sap_core::io::{instance_to_json, parse_coverage, parse_instance, report_json};
use sap_core::oracle::DEFAULT_BUDGET;
use sap_core::reduction::mc_to_sap;
use sap_core::{solve_exact, solve_full_with, solve_half, SapError, SolverConfig};

#[derive(Parser)]
#[command(name = "sap", version, about = "Seminar assignment solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance file and print a report.
    Solve(SolveArgs),
    /// Print a random instance, or the reduction of a Maximum Coverage file.
    Generate(GenerateArgs),
    /// Compare the greedy variants against the oracle on random instances.
    Bench(BenchArgs),
    /// Run the randomized property suites and print pass/fail counts.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Half,
    Full,
    Exact,
}

#[derive(Clone, Copy, ValueEnum)]
enum SizeModelArg {
    Interval,
    Explicit,
    Fixed,
}

#[derive(Args)]
struct SolveArgs {
    path: PathBuf,
    #[arg(long, value_enum, default_value = "full")]
    algorithm: AlgorithmArg,
    /// Largest seed support for `full`.
    #[arg(long, default_value_t = 3)]
    max_support: usize,
    /// Evaluate seeds on the thread pool.
    #[arg(long)]
    parallel: bool,
    /// Maximum number of candidate selections the exact solver may enumerate.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    oracle_budget: u128,
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, value_enum, default_value = "explicit")]
    size_model: SizeModelArg,
    /// Largest allowed-size set (including 0) for the explicit model.
    #[arg(long, default_value_t = 5)]
    max_sizes: usize,
    #[arg(long, default_value_t = 9)]
    p_max: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl ModelArgs {
    fn model(&self) -> SizeModel {
        match self.size_model {
            SizeModelArg::Interval => SizeModel::Interval,
            SizeModelArg::Explicit => SizeModel::Explicit {
                max_len: self.max_sizes,
            },
            SizeModelArg::Fixed => SizeModel::Fixed,
        }
    }
}

#[derive(Args)]
struct GenerateArgs {
    /// Reduce this Maximum Coverage JSON file instead of sampling.
    #[arg(long, value_name = "PATH")]
    from_mc: Option<PathBuf>,
    #[arg(long, default_value_t = 6)]
    students: usize,
    #[arg(long, default_value_t = 3)]
    seminars: usize,
    #[command(flatten)]
    model: ModelArgs,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 100)]
    count: usize,
    /// Largest number of students per instance.
    #[arg(long, default_value_t = 6)]
    students: usize,
    /// Smallest number of students per instance (defaults to `--students`).
    #[arg(long)]
    min_students: Option<usize>,
    /// Largest number of seminars per instance.
    #[arg(long, default_value_t = 4)]
    seminars: usize,
    /// Smallest number of seminars per instance (defaults to `--seminars`).
    #[arg(long)]
    min_seminars: Option<usize>,
    #[command(flatten)]
    model: ModelArgs,
    /// Compute the optimum per instance and enforce the approximation bounds.
    #[arg(long)]
    with_oracle: bool,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    oracle_budget: u128,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

enum Failure {
    Input(String),
    Guard(String),
    Violation(String),
}

impl From<SapError> for Failure {
    fn from(e: SapError) -> Self {
        match e {
            SapError::BudgetExceeded { .. } | SapError::SizeGuard { .. } => {
                Failure::Guard(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(text: &str) {
    // A closed pipe (e.g. `| head`) is not an error worth reporting.
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn print_json(v: &impl serde::Serialize) {
    emit(&serde_json::to_string_pretty(v).expect("serializable"));
}

fn solve(args: SolveArgs) -> Result<(), Failure> {
    let inst = parse_instance(&read(&args.path)?)?;
    let report = match args.algorithm {
        AlgorithmArg::Half => solve_half(&inst),
        AlgorithmArg::Full => solve_full_with(
            &inst,
            SolverConfig {
                max_support: args.max_support,
                parallel: args.parallel,
            },
        ),
        AlgorithmArg::Exact => solve_exact(&inst, args.oracle_budget)?,
    };
    print_json(&report_json(&inst, &report));
    Ok(())
}

fn generate_cmd(args: GenerateArgs) -> Result<(), Failure> {
    let inst = match &args.from_mc {
        Some(path) => mc_to_sap(&parse_coverage(&read(path)?)?)?.0,
        None => generate(&GenParams {
            num_students: args.students,
            num_seminars: args.seminars,
            size_model: args.model.model(),
            p_max: args.model.p_max,
            seed: args.model.seed,
        })?,
    };
    emit(&instance_to_json(&inst));
    Ok(())
}

fn bench(args: BenchArgs) -> Result<(), Failure> {
    let params = BenchParams {
        count: args.count,
        min_students: args.min_students.unwrap_or(args.students),
        max_students: args.students,
        min_seminars: args.min_seminars.unwrap_or(args.seminars),
        max_seminars: args.seminars,
        size_model: args.model.model(),
        p_max: args.model.p_max,
        seed: args.model.seed,
        with_oracle: args.with_oracle,
        oracle_budget: args.oracle_budget,
    };
    let report = run_bench(&params)?;
    print_json(&report);
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Violation(format!(
            "{} instance(s) below the approximation bounds",
            report.summary.violations
        )))
    }
}

fn verify(args: VerifyArgs) -> Result<(), Failure> {
    let outcomes = [
        checks::selection_profit_equivalence(args.seed, args.trials),
        checks::submodularity(args.seed, args.trials),
        checks::oplus_marginals(args.seed, args.trials),
        checks::greedy_density(args.seed, args.trials),
    ];
    let rows: Vec<_> = outcomes
        .iter()
        .map(|o| {
            serde_json::json!({
                "suite": o.name,
                "trials": o.trials,
                "checks": o.checks,
                "passed": o.checks - o.violations,
                "failed": o.violations,
                "first_failure": o.first_violation,
            })
        })
        .collect();
    print_json(&rows);
    let failed: usize = outcomes.iter().map(|o| o.violations).sum();
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Violation(format!(
            "{failed} property check(s) failed"
        )))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(a) => solve(a),
        Command::Generate(a) => generate_cmd(a),
        Command::Bench(a) => bench(a),
        Command::Verify(a) => verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Guard(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Violation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(4)
        }
    }
}
