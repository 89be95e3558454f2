//! Randomized property suites shared by `sap verify` and the test suites.
//!
//! Each suite draws small instances from a seeded generator and compares
//! the matching-based profits against the enumeration oracles, or checks
//! one of the structural inequalities the greedy analysis relies on.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::generate::{random_small_instance, rng_for, SizeModel};
use crate::greedy::greedy_from;
use crate::instance::{Instance, SeminarSelection};
use crate::matching::{partial_matching_value, selection_profit, SlotSet};
use crate::oracle::{
    brute_force_slot_matching, exact_assignment_enumeration, exact_solve, DEFAULT_BUDGET,
};
use crate::rational::Rational;
use crate::solver::enumerate_seed_selections;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub trials: usize,
    pub checks: usize,
    pub violations: usize,
    pub first_violation: Option<String>,
}

impl CheckOutcome {
    fn new(name: &'static str) -> Self {
        CheckOutcome {
            name,
            trials: 0,
            checks: 0,
            violations: 0,
            first_violation: None,
        }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.violations += 1;
            if self.first_violation.is_none() {
                self.first_violation = Some(detail());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

const EXPLICIT: SizeModel = SizeModel::Explicit { max_len: 4 };

fn small_instance(rng: &mut ChaCha8Rng, max_students: usize, max_seminars: usize) -> Instance {
    random_small_instance(rng, max_students, max_seminars, EXPLICIT, 9)
}

/// All feasible selections (every support size).
pub fn feasible_selections(inst: &Instance) -> Vec<SeminarSelection> {
    enumerate_seed_selections(inst, inst.num_seminars()).collect()
}

/// Matching profit equals the direct enumeration optimum for every feasible
/// selection of `instances` random instances.
pub fn selection_profit_equivalence(seed: u64, instances: usize) -> CheckOutcome {
    let mut out = CheckOutcome::new("selection profit = enumeration");
    let mut rng = rng_for(seed, 1);
    for _ in 0..instances {
        let inst = small_instance(&mut rng, 6, 3);
        out.trials += 1;
        for s in feasible_selections(&inst) {
            let fast = selection_profit(&inst, &s).map(|r| r.value);
            let slow = exact_assignment_enumeration(&inst, &s);
            out.record(matches!((&fast, &slow), (Ok(a), Ok(b)) if a == b), || {
                format!(
                    "{:?} on {:?}: {fast:?} vs {slow:?}",
                    s.counts(),
                    inst.data()
                )
            });
        }
    }
    out
}

fn random_slots(rng: &mut ChaCha8Rng, inst: &Instance) -> SlotSet {
    let n = inst.num_students();
    let mut slots = Vec::new();
    for b in 0..inst.num_seminars() {
        for k in 0..n {
            if rng.gen_bool(0.35) {
                slots.push((b, k));
            }
        }
    }
    SlotSet::new(slots)
}

/// `f(X) + f(Y) >= f(X ∪ Y) + f(X ∩ Y)` for the partial matching function,
/// with every value also checked against the subset DP.
pub fn submodularity(seed: u64, trials: usize) -> CheckOutcome {
    let mut out = CheckOutcome::new("partial matching submodularity");
    let mut rng = rng_for(seed, 2);
    for _ in 0..trials {
        let inst = small_instance(&mut rng, 5, 3);
        let x = random_slots(&mut rng, &inst);
        let y = random_slots(&mut rng, &inst);
        out.trials += 1;
        let sets = [x.clone(), y.clone(), x.union(&y), x.intersection(&y)];
        let mut f = Vec::with_capacity(4);
        for set in &sets {
            let v = partial_matching_value(&inst, set).expect("slots in range");
            let dp = brute_force_slot_matching(&inst, set).expect("small instance");
            out.record(v == dp, || format!("f({set:?}) = {v} but DP gives {dp}"));
            f.push(v);
        }
        out.record(&f[0] + &f[1] >= &f[2] + &f[3], || {
            format!(
                "f(X)={} f(Y)={} f(X∪Y)={} f(X∩Y)={}",
                f[0], f[1], f[2], f[3]
            )
        });
    }
    out
}

/// True when `S ⊕ (b, T(b))` fits the student budget for every seminar.
pub fn oplus_precondition(inst: &Instance, s: &SeminarSelection, t: &SeminarSelection) -> bool {
    (0..inst.num_seminars()).all(|b| s.oplus(b, t[b]).cost() <= inst.num_students())
}

/// `Σ_b [p(S ⊕ (b, T(b))) − p(S)] >= p(T) − p(S)`.
pub fn oplus_sum_holds(inst: &Instance, s: &SeminarSelection, t: &SeminarSelection) -> bool {
    let p = |sel: &SeminarSelection| selection_profit(inst, sel).expect("feasible").value;
    let ps = p(s);
    let lhs = (0..inst.num_seminars())
        .map(|b| p(&s.oplus(b, t[b])) - &ps)
        .fold(Rational::from_integer(0.into()), |acc, d| acc + d);
    lhs >= p(t) - ps
}

/// The per-seminar increment inequality on `trials` random `(S, T)` pairs
/// that satisfy its precondition.
pub fn oplus_marginals(seed: u64, trials: usize) -> CheckOutcome {
    let mut out = CheckOutcome::new("per-seminar marginal sum");
    let mut rng = rng_for(seed, 3);
    let mut attempts = 0;
    while out.trials < trials {
        attempts += 1;
        assert!(
            attempts < trials * 1000,
            "could not sample enough (S, T) pairs"
        );
        let inst = small_instance(&mut rng, 6, 3);
        let all = feasible_selections(&inst);
        let s = all.choose(&mut rng).expect("empty selection exists");
        let t = all.choose(&mut rng).expect("empty selection exists");
        if !oplus_precondition(&inst, s, t) {
            continue;
        }
        out.trials += 1;
        out.record(oplus_sum_holds(&inst, s, t), || {
            format!("S={:?} T={:?} on {:?}", s.counts(), t.counts(), inst.data())
        });
    }
    out
}

/// Along every greedy trace from the empty selection, while `S_i ⊕ (b, OPT(b))`
/// stays feasible, the chosen density is at least `(p(OPT) − p(S_i)) / c(OPT)`.
pub fn greedy_density(seed: u64, instances: usize) -> CheckOutcome {
    let mut out = CheckOutcome::new("greedy step density vs optimum");
    let mut rng = rng_for(seed, 4);
    for _ in 0..instances {
        let inst = small_instance(&mut rng, 6, 4);
        out.trials += 1;
        let opt = exact_solve(&inst, DEFAULT_BUDGET).expect("small instance");
        let t = &opt.selection;
        if t.cost() == 0 {
            continue;
        }
        let report =
            greedy_from(&inst, &SeminarSelection::empty(inst.num_seminars())).expect("feasible");
        let trace = report.trace.expect("greedy trace");
        let mut s = trace.initial.clone();
        for step in &trace.steps {
            if !oplus_precondition(&inst, &s, t) {
                break;
            }
            let ps = selection_profit(&inst, &s).expect("feasible").value;
            let cost = Rational::from_integer(step.marginal_cost.into());
            let lhs = &step.marginal_profit / cost;
            let rhs = (&opt.profit - &ps) / Rational::from_integer(t.cost().into());
            out.record(lhs >= rhs, || {
                format!(
                    "at {:?}: density {lhs} < {rhs} on {:?}",
                    s.counts(),
                    inst.data()
                )
            });
            s = s.oplus(step.seminar, step.new_count);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_on_small_runs() {
        for outcome in [
            selection_profit_equivalence(11, 20),
            submodularity(11, 20),
            oplus_marginals(11, 20),
            greedy_density(11, 20),
        ] {
            assert!(outcome.passed(), "{outcome:?}");
            assert!(outcome.trials >= 20);
        }
    }
}
