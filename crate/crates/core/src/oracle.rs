//! Exponential-time ground truth for small instances.
//!
//! [`exact_solve`] enumerates selections and prices each with the matching
//! module. [`exact_assignment_enumeration`] and [`brute_force_slot_matching`]
//! never touch the matching module and serve as independent cross-checks.

use itertools::Itertools;
use num_traits::Zero;

use crate::error::{Result, SapError};
use crate::instance::{Assignment, Instance, SeminarSelection};
use crate::matching::{selection_profit, SlotSet};
use crate::rational::Rational;

pub const DEFAULT_BUDGET: u128 = 1_000_000;
pub const ENUMERATION_LIMIT: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct OracleResult {
    pub profit: Rational,
    pub assignment: Assignment,
    pub selection: SeminarSelection,
    pub selections_enumerated: usize,
}

/// Optimal profit by enumerating every feasible selection. Refuses to run
/// when the product of the allowed-size set sizes exceeds `budget`.
pub fn exact_solve(inst: &Instance, budget: u128) -> Result<OracleResult> {
    let product = inst.selection_space();
    if product > budget {
        return Err(SapError::BudgetExceeded { product, budget });
    }
    let n = inst.num_students();
    let mut best: Option<OracleResult> = None;
    let mut enumerated = 0;
    let choices = inst
        .seminars()
        .iter()
        .map(|s| s.allowed_sizes.iter().copied());
    for counts in choices.multi_cartesian_product() {
        if counts.iter().sum::<usize>() > n {
            continue;
        }
        enumerated += 1;
        let selection = SeminarSelection::new(counts);
        let r = selection_profit(inst, &selection)?;
        if best.as_ref().is_none_or(|b| r.value > b.profit) {
            best = Some(OracleResult {
                profit: r.value,
                assignment: r.assignment,
                selection,
                selections_enumerated: 0,
            });
        }
    }
    // A zero-seminar instance yields no product tuples; its only selection is empty.
    let mut best = best.unwrap_or_else(|| OracleResult {
        profit: Rational::zero(),
        assignment: Assignment::new(),
        selection: SeminarSelection::empty(0),
        selections_enumerated: 0,
    });
    best.selections_enumerated = enumerated.max(1);
    Ok(best)
}

/// Best profit over all placements of exactly `s[b]` students in each
/// seminar, found by direct enumeration.
pub fn exact_assignment_enumeration(inst: &Instance, s: &SeminarSelection) -> Result<Rational> {
    let n = inst.num_students();
    if n > ENUMERATION_LIMIT {
        return Err(SapError::SizeGuard {
            limit: ENUMERATION_LIMIT,
            actual: n,
        });
    }
    if s.len() != inst.num_seminars() {
        return Err(SapError::LengthMismatch {
            expected: inst.num_seminars(),
            actual: s.len(),
        });
    }
    if s.cost() > n {
        return Err(SapError::InfeasibleCounts {
            total: s.cost(),
            students: n,
        });
    }
    let mut remaining = s.counts().to_vec();
    let mut best = None;
    place(
        inst,
        0,
        &mut remaining,
        s.cost(),
        Rational::zero(),
        &mut best,
    );
    Ok(best.expect("some placement exists when counts fit"))
}

fn place(
    inst: &Instance,
    student: usize,
    remaining: &mut [usize],
    needed: usize,
    acc: Rational,
    best: &mut Option<Rational>,
) {
    let left = inst.num_students() - student;
    if needed > left {
        return;
    }
    if student == inst.num_students() {
        if best.as_ref().is_none_or(|b| acc > *b) {
            *best = Some(acc);
        }
        return;
    }
    for b in 0..remaining.len() {
        if remaining[b] > 0 {
            remaining[b] -= 1;
            let next = &acc + inst.profit(student, b);
            place(inst, student + 1, remaining, needed - 1, next, best);
            remaining[b] += 1;
        }
    }
    place(inst, student + 1, remaining, needed, acc, best);
}

/// Maximum-weight matching between the explicit slots of `x` and the
/// students, by dynamic programming over student subsets.
pub fn brute_force_slot_matching(inst: &Instance, x: &SlotSet) -> Result<Rational> {
    let n = inst.num_students();
    if n > ENUMERATION_LIMIT {
        return Err(SapError::SizeGuard {
            limit: ENUMERATION_LIMIT,
            actual: n,
        });
    }
    let full = 1usize << n;
    // best[mask]: best weight with exactly the students in `mask` used so far.
    let mut best: Vec<Option<Rational>> = vec![None; full];
    best[0] = Some(Rational::zero());
    for (b, _) in x.iter() {
        if b >= inst.num_seminars() {
            return Err(SapError::IndexOutOfRange {
                what: "seminar",
                index: b,
                limit: inst.num_seminars(),
            });
        }
        let prev = best.clone();
        for mask in 0..full {
            let Some(v) = &prev[mask] else { continue };
            for i in (0..n).filter(|i| mask & (1 << i) == 0) {
                let cand = v + inst.profit(i, b);
                let slot = &mut best[mask | (1 << i)];
                if slot.as_ref().is_none_or(|cur| cand > *cur) {
                    *slot = Some(cand);
                }
            }
        }
    }
    Ok(best
        .into_iter()
        .flatten()
        .max()
        .unwrap_or_else(Rational::zero))
}
