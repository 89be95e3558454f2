use thiserror::Error;

use crate::instance::Violation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SapError {
    #[error("expected {expected} entries, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("{what} index {index} out of range (limit {limit})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        limit: usize,
    },

    #[error("counts total {total} exceeds the {students} available students")]
    InfeasibleCounts { total: usize, students: usize },

    #[error("seminar selection is not feasible for this instance")]
    InfeasibleSelection,

    #[error("invalid instance: {}", join_violations(.0))]
    InvalidInstance(Vec<Violation>),

    #[error("profits need a common denominator that does not fit in 64 bits")]
    ProfitScaleOverflow,

    #[error("oracle refuses to run: {product} candidate selections exceed budget {budget}")]
    BudgetExceeded { product: u128, budget: u128 },

    #[error("brute-force enumeration limited to {limit} students, instance has {actual}")]
    SizeGuard { limit: usize, actual: usize },

    #[error("degenerate instance: {0}")]
    Degenerate(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("parse error: {0}")]
    Parse(String),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T> = std::result::Result<T, SapError>;
