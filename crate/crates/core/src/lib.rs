//! Seminar assignment: students are placed into seminars whose head-counts
//! must lie in per-seminar allowed sets, maximizing total profit.
//!
//! * [`matching`] prices a head-count vector exactly (transportation problem).
//! * [`greedy`] grows a selection by best marginal profit per student.
//! * [`solver`] runs the greedy from the empty selection or from every seed
//!   supported on at most three seminars.
//! * [`oracle`] gives exact answers on small instances.
//! * [`reduction`] embeds Maximum Coverage instances.

pub mod bench;
pub mod checks;
pub mod error;
pub mod generate;
pub mod greedy;
pub mod instance;
pub mod io;
pub mod matching;
pub mod oracle;
pub mod rational;
pub mod reduction;
pub mod solver;

pub use error::{Result, SapError};
pub use greedy::{greedy_from, increments, oplus, GreedyStep, GreedyTrace};
pub use instance::{
    assignment_profit, is_feasible_assignment, is_feasible_selection, selection_cost,
    selection_of_assignment, validate_instance, Assignment, Instance, InstanceData, Seminar,
    SeminarSelection, Violation,
};
pub use matching::{
    partial_matching_value, profit_of_counts, selection_profit, single_seminar_best,
    MatchingResult, SlotSet,
};
pub use oracle::{exact_assignment_enumeration, exact_solve, OracleResult};
pub use rational::Rational;
pub use solver::{
    enumerate_seed_selections, solve_exact, solve_full, solve_full_with, solve_half, Algorithm,
    SolveReport, SolverConfig,
};
