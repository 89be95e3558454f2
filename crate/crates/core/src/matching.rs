//! Exact selection profits as a transportation problem.
//!
//! Seminars are capacitated sinks and students unit sources, so the slot
//! vertices of one seminar never need to be materialized: they are
//! interchangeable. Optimal flows are grown one unit at a time along a
//! maximum-gain augmenting chain (successive shortest paths on the residual
//! network, collapsed onto the seminar nodes). All arithmetic is on the
//! instance's integer-scaled profits and therefore exact.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::error::{Result, SapError};
use crate::instance::{
    is_feasible_selection, Assignment, Instance, ScaledProfits, SeminarSelection,
};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq)]
pub struct MatchingResult {
    pub value: Rational,
    pub assignment: Assignment,
}

/// Explicit subset of slot vertices `(seminar, slot)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SlotSet {
    slots: BTreeSet<(usize, usize)>,
}

impl SlotSet {
    pub fn new(slots: impl IntoIterator<Item = (usize, usize)>) -> Self {
        SlotSet {
            slots: slots.into_iter().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.slots.iter().copied()
    }

    pub fn union(&self, other: &SlotSet) -> SlotSet {
        SlotSet {
            slots: self.slots.union(&other.slots).copied().collect(),
        }
    }

    pub fn intersection(&self, other: &SlotSet) -> SlotSet {
        SlotSet {
            slots: self.slots.intersection(&other.slots).copied().collect(),
        }
    }

    /// Number of slots per seminar.
    pub fn counts(&self, num_seminars: usize) -> Vec<usize> {
        let mut c = vec![0; num_seminars];
        for &(b, _) in &self.slots {
            c[b] += 1;
        }
        c
    }
}

#[derive(Clone, Copy, Debug)]
enum Step {
    /// Take this currently unassigned student.
    Free(usize),
    /// Take this student away from the given seminar, which then refills.
    Move(usize, usize),
}

/// An optimal assignment for its current head-count vector.
#[derive(Clone, Debug)]
pub(crate) struct FlowState {
    seminar_of: Vec<Option<usize>>,
    counts: Vec<usize>,
    free: usize,
    value: i128,
}

impl FlowState {
    pub(crate) fn new(num_students: usize, num_seminars: usize) -> Self {
        FlowState {
            seminar_of: vec![None; num_students],
            counts: vec![0; num_seminars],
            free: num_students,
            value: 0,
        }
    }

    /// Builds the optimum for `counts`, which must total at most the number of students.
    pub(crate) fn for_counts(inst: &Instance, counts: &[usize]) -> Self {
        let mut st = FlowState::new(inst.num_students(), inst.num_seminars());
        for (b, &k) in counts.iter().enumerate() {
            for _ in 0..k {
                st.augment(inst.scaled(), |a| a == b)
                    .expect("counts exceed the number of students");
            }
        }
        st
    }

    pub(crate) fn value(&self) -> i128 {
        self.value
    }

    pub(crate) fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub(crate) fn assignment(&self) -> Assignment {
        Assignment::from_dense(&self.seminar_of)
    }

    /// Adds one student to the best seminar accepted by `source`, re-routing
    /// other students along the maximum-gain chain. Returns the gain, or
    /// `None` when no student is free or no seminar is eligible.
    pub(crate) fn augment(
        &mut self,
        w: &ScaledProfits,
        source: impl Fn(usize) -> bool,
    ) -> Option<i128> {
        if self.free == 0 {
            return None;
        }
        let m = self.counts.len();

        // Best direct and best one-hop re-routing edges.
        let mut gain: Vec<Option<i128>> = vec![None; m];
        let mut parent: Vec<Option<Step>> = vec![None; m];
        let mut best_move: Vec<Option<(i128, usize)>> = vec![None; m * m];
        for (i, slot) in self.seminar_of.iter().enumerate() {
            match *slot {
                None => {
                    for a in 0..m {
                        let g = w.get(i, a) as i128;
                        if gain[a].is_none_or(|cur| g > cur) {
                            gain[a] = Some(g);
                            parent[a] = Some(Step::Free(i));
                        }
                    }
                }
                Some(c) => {
                    let out = w.get(i, c) as i128;
                    for a in (0..m).filter(|&a| a != c) {
                        let d = w.get(i, a) as i128 - out;
                        let e = &mut best_move[a * m + c];
                        if e.is_none_or(|(cur, _)| d > cur) {
                            *e = Some((d, i));
                        }
                    }
                }
            }
        }

        // Longest chains; the current flow is optimal so no positive cycles exist.
        let mut rounds = 0;
        loop {
            let mut changed = false;
            for a in 0..m {
                for c in 0..m {
                    if let (Some((d, i)), Some(gc)) = (best_move[a * m + c], gain[c]) {
                        let cand = d + gc;
                        if gain[a].is_none_or(|cur| cand > cur) {
                            gain[a] = Some(cand);
                            parent[a] = Some(Step::Move(i, c));
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
            rounds += 1;
            assert!(
                rounds <= m,
                "positive re-routing cycle: flow was not optimal"
            );
        }

        let mut start: Option<(usize, i128)> = None;
        for a in (0..m).filter(|&a| source(a)) {
            if let Some(g) = gain[a] {
                if start.is_none_or(|(_, cur)| g > cur) {
                    start = Some((a, g));
                }
            }
        }
        let (s, g) = start?;

        let mut cur = s;
        for _ in 0..=m {
            match parent[cur].expect("reachable seminar without parent") {
                Step::Free(i) => {
                    self.seminar_of[i] = Some(cur);
                    self.counts[s] += 1;
                    self.free -= 1;
                    self.value += g;
                    return Some(g);
                }
                Step::Move(i, c) => {
                    self.seminar_of[i] = Some(cur);
                    cur = c;
                }
            }
        }
        unreachable!("augmenting chain revisits a seminar")
    }
}

fn to_result(inst: &Instance, st: &FlowState) -> MatchingResult {
    MatchingResult {
        value: inst.unscale(st.value()),
        assignment: st.assignment(),
    }
}

/// Maximum total profit over assignments placing exactly `counts[b]`
/// students in each seminar `b`, with an optimal assignment.
pub fn profit_of_counts(inst: &Instance, counts: &[usize]) -> Result<MatchingResult> {
    if counts.len() != inst.num_seminars() {
        return Err(SapError::LengthMismatch {
            expected: inst.num_seminars(),
            actual: counts.len(),
        });
    }
    let total: usize = counts.iter().sum();
    if total > inst.num_students() {
        return Err(SapError::InfeasibleCounts {
            total,
            students: inst.num_students(),
        });
    }
    Ok(to_result(inst, &FlowState::for_counts(inst, counts)))
}

/// `p(S)`: the optimal profit of a feasible selection.
pub fn selection_profit(inst: &Instance, s: &SeminarSelection) -> Result<MatchingResult> {
    if !is_feasible_selection(inst, s)? {
        return Err(SapError::InfeasibleSelection);
    }
    profit_of_counts(inst, s.counts())
}

/// Value of a maximum-weight matching between the slots in `x` and all
/// students. Sets larger than the student body leave slots unmatched.
pub fn partial_matching_value(inst: &Instance, x: &SlotSet) -> Result<Rational> {
    let n = inst.num_students();
    let m = inst.num_seminars();
    for (b, slot) in x.iter() {
        if b >= m {
            return Err(SapError::IndexOutOfRange {
                what: "seminar",
                index: b,
                limit: m,
            });
        }
        if slot >= n {
            return Err(SapError::IndexOutOfRange {
                what: "slot",
                index: slot,
                limit: n,
            });
        }
    }
    let caps = x.counts(m);
    if x.len() <= n {
        return Ok(profit_of_counts(inst, &caps)?.value);
    }
    // Every augmentation gains at least zero, so saturating the students is optimal.
    let mut st = FlowState::new(n, m);
    for _ in 0..n {
        let counts = st.counts().to_vec();
        st.augment(inst.scaled(), |a| counts[a] < caps[a]);
    }
    Ok(inst.unscale(st.value()))
}

/// Students of column `b` by decreasing profit, ties by index.
fn ranked_column(inst: &Instance, b: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..inst.num_students()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(inst.scaled().get(i, b)));
    order
}

/// Best assignment that uses seminar `b` alone: the allowed size `k` whose
/// top-`k` column sum is largest (ties toward smaller `k`).
pub fn single_seminar_best(inst: &Instance, b: usize) -> Result<(usize, Rational)> {
    let (k, value, _) = single_seminar_assignment(inst, b)?;
    Ok((k, value))
}

pub(crate) fn single_seminar_assignment(
    inst: &Instance,
    b: usize,
) -> Result<(usize, Rational, Assignment)> {
    if b >= inst.num_seminars() {
        return Err(SapError::IndexOutOfRange {
            what: "seminar",
            index: b,
            limit: inst.num_seminars(),
        });
    }
    let order = ranked_column(inst, b);
    let mut prefix = vec![0i128; order.len() + 1];
    for (r, &i) in order.iter().enumerate() {
        prefix[r + 1] = prefix[r] + inst.scaled().get(i, b) as i128;
    }
    let mut best = (0usize, 0i128);
    for &k in &inst.seminar(b).allowed_sizes {
        if k <= inst.num_students() && prefix[k] > best.1 {
            best = (k, prefix[k]);
        }
    }
    let assignment = Assignment::from_pairs(order[..best.0].iter().map(|&i| (i, b)));
    let value = if best.1 == 0 {
        Rational::zero()
    } else {
        inst.unscale(best.1)
    };
    Ok((best.0, value, assignment))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{assignment_profit, selection_of_assignment};
    use crate::rational::int;

    fn three_by_two() -> Instance {
        Instance::from_int_profits(
            3,
            vec![vec![0, 1], vec![0, 2]],
            vec![vec![5, 4], vec![3, 4], vec![1, 2]],
        )
        .unwrap()
    }

    fn column(k: Vec<usize>, col: Vec<i64>) -> Instance {
        let n = col.len();
        Instance::from_int_profits(n, vec![k], col.into_iter().map(|p| vec![p]).collect()).unwrap()
    }

    #[test]
    fn counts_one_two_on_three_by_two() {
        let r = profit_of_counts(&three_by_two(), &[1, 2]).unwrap();
        assert_eq!(r.value, int(11));
        assert_eq!(
            r.assignment,
            Assignment::from_pairs([(0, 0), (1, 1), (2, 1)])
        );
    }

    #[test]
    fn empty_counts_give_empty_matching() {
        let r = profit_of_counts(&three_by_two(), &[0, 0]).unwrap();
        assert_eq!(r.value, int(0));
        assert!(r.assignment.is_empty());
    }

    #[test]
    fn single_forced_edge() {
        let r = profit_of_counts(&column(vec![0, 1], vec![7]), &[1]).unwrap();
        assert_eq!(r.value, int(7));
    }

    #[test]
    fn counts_over_budget_rejected() {
        assert_eq!(
            profit_of_counts(&three_by_two(), &[2, 2]).unwrap_err(),
            SapError::InfeasibleCounts {
                total: 4,
                students: 3
            }
        );
    }

    #[test]
    fn selection_profit_requires_feasibility() {
        let inst = three_by_two();
        let s = SeminarSelection::new(vec![1, 2]);
        assert_eq!(selection_profit(&inst, &s).unwrap().value, int(11));
        assert_eq!(
            selection_profit(&inst, &SeminarSelection::empty(2))
                .unwrap()
                .value,
            int(0)
        );
        assert_eq!(
            selection_profit(&inst, &SeminarSelection::new(vec![1, 1])).unwrap_err(),
            SapError::InfeasibleSelection
        );
    }

    #[test]
    fn single_seminar_top_two() {
        let inst = column(vec![0, 2], vec![5, 3, 1]);
        let r = selection_profit(&inst, &SeminarSelection::new(vec![2])).unwrap();
        assert_eq!(r.value, int(8));
        assert_eq!(r.assignment, Assignment::from_pairs([(0, 0), (1, 0)]));
    }

    #[test]
    fn rerouting_beats_greedy_fill() {
        // Seminar 0 filled first grabs student 0; seminar 1 then needs student 0 more.
        let inst = Instance::from_int_profits(
            2,
            vec![vec![0, 1], vec![0, 1]],
            vec![vec![5, 9], vec![4, 0]],
        )
        .unwrap();
        let r = profit_of_counts(&inst, &[1, 1]).unwrap();
        assert_eq!(r.value, int(13));
        assert_eq!(r.assignment, Assignment::from_pairs([(0, 1), (1, 0)]));
    }

    #[test]
    fn fractional_profits_stay_exact() {
        let data = crate::instance::InstanceData {
            num_students: 2,
            seminars: vec![crate::instance::Seminar::new("a", vec![0, 1, 2])],
            profits: vec![
                vec![crate::rational::parse("1/3").unwrap()],
                vec![crate::rational::parse("1/6").unwrap()],
            ],
        };
        let inst = Instance::new(data).unwrap();
        let r = profit_of_counts(&inst, &[2]).unwrap();
        assert_eq!(r.value, crate::rational::parse("1/2").unwrap());
    }

    #[test]
    fn partial_matching_examples() {
        let inst = column(vec![0, 1, 2, 3], vec![5, 3, 1]);
        assert_eq!(
            partial_matching_value(&inst, &SlotSet::default()).unwrap(),
            int(0)
        );
        let x = SlotSet::new([(0, 0), (0, 2)]);
        assert_eq!(partial_matching_value(&inst, &x).unwrap(), int(8));
        assert!(partial_matching_value(&inst, &SlotSet::new([(0, 3)])).is_err());
        assert!(partial_matching_value(&inst, &SlotSet::new([(1, 0)])).is_err());
    }

    #[test]
    fn partial_matching_with_more_slots_than_students() {
        let inst = Instance::from_int_profits(
            2,
            vec![vec![0, 1, 2], vec![0, 1, 2]],
            vec![vec![5, 1], vec![4, 3]],
        )
        .unwrap();
        let x = SlotSet::new([(0, 0), (0, 1), (1, 0)]);
        assert_eq!(partial_matching_value(&inst, &x).unwrap(), int(9));
    }

    #[test]
    fn single_seminar_best_examples() {
        assert_eq!(
            single_seminar_best(&column(vec![0, 3], vec![1, 1, 1, 0]), 0).unwrap(),
            (3, int(3))
        );
        assert_eq!(
            single_seminar_best(&column(vec![0], vec![4, 2]), 0).unwrap(),
            (0, int(0))
        );
        assert_eq!(
            single_seminar_best(&column(vec![0, 1, 2], vec![5, 3]), 0).unwrap(),
            (2, int(8))
        );
        // Ties prefer the smaller size.
        assert_eq!(
            single_seminar_best(&column(vec![0, 1, 2], vec![5, 0]), 0).unwrap(),
            (1, int(5))
        );
        assert!(single_seminar_best(&column(vec![0, 1], vec![1]), 1).is_err());
    }

    #[test]
    fn result_is_realizable() {
        let inst = three_by_two();
        for counts in [[0, 2], [1, 0], [1, 1], [1, 2], [0, 3]] {
            let r = profit_of_counts(&inst, &counts).unwrap();
            assert_eq!(assignment_profit(&inst, &r.assignment).unwrap(), r.value);
            assert_eq!(
                selection_of_assignment(&inst, &r.assignment)
                    .unwrap()
                    .counts(),
                &counts
            );
        }
    }
}
