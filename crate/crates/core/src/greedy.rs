//! Density greedy over seminar selections.
//!
//! Starting from an initial selection, each iteration moves to the feasible
//! incrementing selection with the largest marginal profit per added
//! student. The result is the better of the final selection's optimal
//! assignment and the best single-seminar assignment among seminars that
//! the initial selection left empty.

use std::time::Instant;

use serde::Serialize;

use crate::error::{Result, SapError};
use crate::instance::{is_feasible_selection, Instance, SeminarSelection};
use crate::matching::{selection_profit, single_seminar_assignment, FlowState};
use crate::rational::{self, Rational};
use crate::solver::{Algorithm, SolveReport};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GreedyStep {
    pub seminar: usize,
    pub new_count: usize,
    #[serde(with = "rational::string")]
    pub marginal_profit: Rational,
    pub marginal_cost: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GreedyTrace {
    pub initial: SeminarSelection,
    pub steps: Vec<GreedyStep>,
    #[serde(rename = "final")]
    pub final_selection: SeminarSelection,
}

impl SeminarSelection {
    /// `S ⊕ (b, k)`: raises seminar `b` to at least `k`. Panics if `b` is out of range.
    pub fn oplus(&self, b: usize, k: usize) -> SeminarSelection {
        let mut counts = self.counts().to_vec();
        counts[b] = counts[b].max(k);
        SeminarSelection::new(counts)
    }
}

pub fn oplus(s: &SeminarSelection, b: usize, k: usize) -> SeminarSelection {
    s.oplus(b, k)
}

fn require_feasible(inst: &Instance, s: &SeminarSelection) -> Result<()> {
    if is_feasible_selection(inst, s)? {
        Ok(())
    } else {
        Err(SapError::InfeasibleSelection)
    }
}

/// Allowed sizes of `b` that raise it above `current` within `budget` extra students.
fn raise_options(
    inst: &Instance,
    b: usize,
    current: usize,
    budget: usize,
) -> impl Iterator<Item = usize> + '_ {
    inst.seminar(b)
        .allowed_sizes
        .iter()
        .copied()
        .filter(move |&k| k > current && k - current <= budget)
}

/// All feasible selections that raise exactly one seminar, ordered by
/// `(seminar, new count)`.
pub fn increments(inst: &Instance, s: &SeminarSelection) -> Result<Vec<SeminarSelection>> {
    require_feasible(inst, s)?;
    let budget = inst.num_students() - s.cost();
    let mut out = Vec::new();
    for b in 0..inst.num_seminars() {
        for k in raise_options(inst, b, s[b], budget) {
            out.push(s.oplus(b, k));
        }
    }
    Ok(out)
}

/// One chosen increment, with the optimal flow of the selection it leads to.
pub(crate) struct Move {
    pub(crate) seminar: usize,
    pub(crate) new_count: usize,
    pub(crate) gain: i128,
    pub(crate) cost: usize,
    pub(crate) state: FlowState,
}

/// The arg-max density increment of the selection held by `state`; ties go
/// to the smallest seminar, then the smallest new count.
pub(crate) fn best_increment(inst: &Instance, state: &FlowState) -> Option<Move> {
    let budget = inst.num_students() - state.counts().iter().sum::<usize>();
    let base = state.value();
    let mut best: Option<Move> = None;
    for b in 0..inst.num_seminars() {
        let current = state.counts()[b];
        let mut trial: Option<FlowState> = None;
        for k in raise_options(inst, b, current, budget) {
            let t = trial.get_or_insert_with(|| state.clone());
            while t.counts()[b] < k {
                t.augment(inst.scaled(), |a| a == b)
                    .expect("budget admits another student");
            }
            let gain = t.value() - base;
            let cost = k - current;
            // gain / cost > best.gain / best.cost
            let better = best
                .as_ref()
                .is_none_or(|m| gain * m.cost as i128 > m.gain * cost as i128);
            if better {
                best = Some(Move {
                    seminar: b,
                    new_count: k,
                    gain,
                    cost,
                    state: t.clone(),
                });
            }
        }
    }
    best
}

/// Runs the greedy from `s0` and reports the better of its two candidate
/// assignments (ties favour the greedy's own selection).
pub fn greedy_from(inst: &Instance, s0: &SeminarSelection) -> Result<SolveReport> {
    require_feasible(inst, s0)?;
    let started = Instant::now();

    let mut state = FlowState::for_counts(inst, s0.counts());
    let mut steps = Vec::new();
    while let Some(mv) = best_increment(inst, &state) {
        steps.push(GreedyStep {
            seminar: mv.seminar,
            new_count: mv.new_count,
            marginal_profit: inst.unscale(mv.gain),
            marginal_cost: mv.cost,
        });
        state = mv.state;
    }
    let final_selection = SeminarSelection::new(state.counts().to_vec());
    let primary = selection_profit(inst, &final_selection)?;

    let mut fallback: Option<(usize, Rational, _)> = None;
    for b in (0..inst.num_seminars()).filter(|&b| s0[b] == 0) {
        let (k, value, assignment) = single_seminar_assignment(inst, b)?;
        if fallback.as_ref().is_none_or(|(_, best, _)| value > *best) {
            fallback = Some((k, value, assignment));
        }
    }

    let trace = GreedyTrace {
        initial: s0.clone(),
        steps,
        final_selection: final_selection.clone(),
    };
    let mut report = SolveReport {
        algorithm: Algorithm::Greedy,
        profit: primary.value,
        assignment: primary.assignment,
        seed_selection: s0.clone(),
        selection: final_selection,
        single_seminar_fallback: false,
        trace: Some(trace),
        wall_time: Default::default(),
        seeds_evaluated: 1,
        fixed_size: inst.is_fixed_size(),
    };
    if let Some((_, value, assignment)) = fallback {
        if value > report.profit {
            report.selection = crate::instance::selection_of_assignment(inst, &assignment)?;
            report.profit = value;
            report.assignment = assignment;
            report.single_seminar_fallback = true;
        }
    }
    report.wall_time = started.elapsed();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn sel(v: &[usize]) -> SeminarSelection {
        SeminarSelection::new(v.to_vec())
    }

    #[test]
    fn oplus_examples() {
        assert_eq!(oplus(&sel(&[1, 2]), 0, 3), sel(&[3, 2]));
        assert_eq!(oplus(&sel(&[1, 2]), 0, 0), sel(&[1, 2]));
        assert_eq!(oplus(&sel(&[0, 2]), 1, 2), sel(&[0, 2]));
    }

    #[test]
    fn increments_examples() {
        let one =
            Instance::from_int_profits(2, vec![vec![0, 1, 2]], vec![vec![1], vec![1]]).unwrap();
        assert_eq!(
            increments(&one, &sel(&[0])).unwrap(),
            vec![sel(&[1]), sel(&[2])]
        );

        let four = Instance::from_int_profits(4, vec![vec![0, 2], vec![0, 3]], vec![vec![1, 1]; 4])
            .unwrap();
        assert!(increments(&four, &sel(&[2, 0])).unwrap().is_empty());

        let five = Instance::from_int_profits(5, vec![vec![0, 2], vec![0, 3]], vec![vec![1, 1]; 5])
            .unwrap();
        assert_eq!(
            increments(&five, &sel(&[2, 0])).unwrap(),
            vec![sel(&[2, 3])]
        );

        assert_eq!(
            increments(&five, &sel(&[1, 0])).unwrap_err(),
            SapError::InfeasibleSelection
        );
    }

    #[test]
    fn single_increment_instance() {
        let inst = Instance::from_int_profits(2, vec![vec![0, 2]], vec![vec![5], vec![3]]).unwrap();
        let r = greedy_from(&inst, &sel(&[0])).unwrap();
        assert_eq!(r.selection, sel(&[2]));
        assert_eq!(r.profit, int(8));
    }

    #[test]
    fn three_by_two_trace() {
        let inst = Instance::from_int_profits(
            3,
            vec![vec![0, 1], vec![0, 2]],
            vec![vec![5, 4], vec![3, 4], vec![1, 2]],
        )
        .unwrap();
        let r = greedy_from(&inst, &sel(&[0, 0])).unwrap();
        let trace = r.trace.as_ref().unwrap();
        assert_eq!(
            trace.steps,
            vec![
                GreedyStep {
                    seminar: 0,
                    new_count: 1,
                    marginal_profit: int(5),
                    marginal_cost: 1
                },
                GreedyStep {
                    seminar: 1,
                    new_count: 2,
                    marginal_profit: int(6),
                    marginal_cost: 2
                },
            ]
        );
        assert_eq!(trace.final_selection, sel(&[1, 2]));
        assert_eq!(r.profit, int(11));
        assert!(!r.single_seminar_fallback);
    }

    #[test]
    fn all_zero_profits() {
        let inst = Instance::from_int_profits(3, vec![vec![0, 1], vec![0, 2]], vec![vec![0, 0]; 3])
            .unwrap();
        let r = greedy_from(&inst, &sel(&[0, 0])).unwrap();
        assert_eq!(r.profit, int(0));
        assert!(!r.single_seminar_fallback);
        // Zero-density increments are still taken.
        assert_eq!(r.selection, sel(&[1, 2]));
    }

    #[test]
    fn empty_increments_at_entry_keeps_seed() {
        let inst = Instance::from_int_profits(2, vec![vec![0, 2]], vec![vec![1], vec![2]]).unwrap();
        let r = greedy_from(&inst, &sel(&[2])).unwrap();
        assert!(r.trace.unwrap().steps.is_empty());
        assert_eq!(r.profit, int(3));
    }

    #[test]
    fn fallback_wins_when_greedy_is_trapped() {
        // Seminar 0 has the best density for one student but then blocks the
        // large seminar 1 that only fits alone.
        let inst = Instance::from_int_profits(
            3,
            vec![vec![0, 1], vec![0, 3]],
            vec![vec![10, 9], vec![0, 9], vec![0, 9]],
        )
        .unwrap();
        let r = greedy_from(&inst, &sel(&[0, 0])).unwrap();
        assert!(r.single_seminar_fallback);
        assert_eq!(r.profit, int(27));
        assert_eq!(r.selection, sel(&[0, 3]));
    }

    #[test]
    fn rejects_infeasible_seed() {
        let inst = Instance::from_int_profits(2, vec![vec![0, 2]], vec![vec![1], vec![2]]).unwrap();
        assert!(greedy_from(&inst, &sel(&[1])).is_err());
    }
}
