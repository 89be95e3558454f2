use proptest::prelude::*;
use sap_core::checks::{feasible_selections, oplus_precondition, oplus_sum_holds};
use sap_core::instance::{InstanceData, Seminar};
use sap_core::io::{instance_to_json, parse_instance};
use sap_core::matching::SlotSet;
use sap_core::rational::{self, Rational};
use sap_core::*;

fn instance_strategy(max_students: usize, max_seminars: usize) -> impl Strategy<Value = Instance> {
    (1..=max_students, 1..=max_seminars).prop_flat_map(|(n, m)| {
        let sizes = proptest::collection::vec(proptest::collection::btree_set(1..=n, 0..=3), m);
        let profits = proptest::collection::vec(proptest::collection::vec(0i64..=9, m), n);
        (sizes, profits).prop_map(move |(sizes, profits)| {
            let data = InstanceData {
                num_students: n,
                seminars: sizes
                    .into_iter()
                    .enumerate()
                    .map(|(b, s)| {
                        Seminar::new(format!("b{b}"), std::iter::once(0).chain(s).collect())
                    })
                    .collect(),
                profits: profits
                    .into_iter()
                    .map(|r| r.into_iter().map(rational::int).collect())
                    .collect(),
            };
            Instance::new(data).unwrap()
        })
    })
}

/// Instance plus a random count vector that fits the student budget.
fn with_counts() -> impl Strategy<Value = (Instance, Vec<usize>)> {
    instance_strategy(6, 3).prop_flat_map(|inst| {
        let n = inst.num_students();
        let m = inst.num_seminars();
        proptest::collection::vec(0..=n, m).prop_map(move |mut c| {
            while c.iter().sum::<usize>() > n {
                let b = c.iter().position(|&x| x > 0).unwrap();
                c[b] -= 1;
            }
            (inst.clone(), c)
        })
    })
}

fn random_assignment(inst: &Instance, picks: &[u8]) -> Assignment {
    let m = inst.num_seminars();
    Assignment::from_pairs(
        picks
            .iter()
            .take(inst.num_students())
            .enumerate()
            .filter(|(_, &p)| (p as usize) < m)
            .map(|(i, &p)| (i, p as usize)),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn feasible_assignments_give_feasible_selections(
        inst in instance_strategy(6, 3),
        picks in proptest::collection::vec(0u8..4, 6),
    ) {
        let a = random_assignment(&inst, &picks);
        let s = selection_of_assignment(&inst, &a).unwrap();
        prop_assert_eq!(selection_cost(&s), a.len());
        if is_feasible_assignment(&inst, &a).unwrap() {
            prop_assert!(is_feasible_selection(&inst, &s).unwrap());
        }
    }

    #[test]
    fn assignment_profit_is_additive(
        inst in instance_strategy(6, 3),
        picks in proptest::collection::vec(0u8..4, 6),
        split in 0usize..7,
    ) {
        let a = random_assignment(&inst, &picks);
        let left = Assignment::from_pairs(a.iter().filter(|&(i, _)| i < split));
        let right = Assignment::from_pairs(a.iter().filter(|&(i, _)| i >= split));
        prop_assert_eq!(
            assignment_profit(&inst, &a).unwrap(),
            assignment_profit(&inst, &left).unwrap() + assignment_profit(&inst, &right).unwrap()
        );
    }

    #[test]
    fn counts_profit_matches_enumeration_and_is_realized((inst, counts) in with_counts()) {
        let r = profit_of_counts(&inst, &counts).unwrap();
        let brute = exact_assignment_enumeration(&inst, &SeminarSelection::new(counts.clone())).unwrap();
        prop_assert_eq!(&r.value, &brute);
        prop_assert_eq!(assignment_profit(&inst, &r.assignment).unwrap(), r.value);
        let realized = selection_of_assignment(&inst, &r.assignment).unwrap();
        prop_assert_eq!(realized.counts(), &counts[..]);
    }

    #[test]
    fn counts_profit_is_monotone((inst, counts) in with_counts(), b in 0usize..3) {
        let b = b % inst.num_seminars();
        if counts.iter().sum::<usize>() < inst.num_students() {
            let mut more = counts.clone();
            more[b] += 1;
            let lo = profit_of_counts(&inst, &counts).unwrap().value;
            let hi = profit_of_counts(&inst, &more).unwrap().value;
            prop_assert!(lo <= hi);
        }
    }

    #[test]
    fn slot_value_depends_only_on_counts(
        (inst, counts) in with_counts(),
        shift in 0usize..6,
    ) {
        let n = inst.num_students();
        let slots = |offset: usize| SlotSet::new(counts.iter().enumerate().flat_map(|(b, &k)| {
            (0..k).map(move |j| (b, (j + offset) % n))
        }));
        let a = partial_matching_value(&inst, &slots(0)).unwrap();
        let b = partial_matching_value(&inst, &slots(shift)).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a, profit_of_counts(&inst, &counts).unwrap().value);
    }

    #[test]
    fn greedy_trace_invariants(inst in instance_strategy(6, 4)) {
        let r = solve_half(&inst);
        let trace = r.trace.as_ref().unwrap();
        prop_assert!(trace.steps.len() <= inst.num_students());
        let mut s = trace.initial.clone();
        let mut prev = selection_profit(&inst, &s).unwrap().value;
        for step in &trace.steps {
            prop_assert!(step.marginal_cost >= 1);
            prop_assert!(step.marginal_profit >= Rational::from_integer(0.into()));
            s = s.oplus(step.seminar, step.new_count);
            let p = selection_profit(&inst, &s).unwrap().value;
            prop_assert_eq!(&p - &prev, step.marginal_profit.clone());
            prop_assert!(p >= prev);
            prev = p;
        }
        prop_assert_eq!(&s, &trace.final_selection);
        prop_assert!(s.cost() <= inst.num_students());
        prop_assert!(increments(&inst, &s).unwrap().is_empty());
        // Report invariants.
        prop_assert!(is_feasible_assignment(&inst, &r.assignment).unwrap());
        prop_assert_eq!(assignment_profit(&inst, &r.assignment).unwrap(), r.profit.clone());
        // Determinism.
        prop_assert!(r.same_content(&solve_half(&inst)));
    }

    #[test]
    fn full_dominates_every_seed(inst in instance_strategy(5, 3)) {
        let full = solve_full(&inst);
        prop_assert!(is_feasible_assignment(&inst, &full.assignment).unwrap());
        prop_assert_eq!(assignment_profit(&inst, &full.assignment).unwrap(), full.profit.clone());
        for seed in enumerate_seed_selections(&inst, 3) {
            prop_assert!(full.profit >= greedy_from(&inst, &seed).unwrap().profit);
        }
        let opt = exact_solve(&inst, 1_000_000).unwrap();
        prop_assert!(opt.profit >= full.profit);
        let parallel = solve_full_with(&inst, SolverConfig { parallel: true, ..Default::default() });
        prop_assert!(full.same_content(&parallel));
    }

    #[test]
    fn seeds_are_distinct_feasible_and_bounded(inst in instance_strategy(6, 4), cap in 0usize..4) {
        let seeds: Vec<_> = enumerate_seed_selections(&inst, cap).collect();
        let unique: std::collections::BTreeSet<_> = seeds.iter().cloned().collect();
        prop_assert_eq!(unique.len(), seeds.len());
        for s in &seeds {
            prop_assert!(is_feasible_selection(&inst, s).unwrap());
            prop_assert!(s.support() <= cap);
        }
        let expected = feasible_selections(&inst).into_iter().filter(|s| s.support() <= cap).count();
        prop_assert_eq!(seeds.len(), expected);
    }

    #[test]
    fn oplus_marginal_sum(inst in instance_strategy(6, 3), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let all = feasible_selections(&inst);
        let s = i.get(&all);
        let t = j.get(&all);
        prop_assume!(oplus_precondition(&inst, s, t));
        prop_assert!(oplus_sum_holds(&inst, s, t));
    }

    #[test]
    fn instance_json_round_trips(inst in instance_strategy(6, 4)) {
        let text = instance_to_json(&inst);
        prop_assert_eq!(parse_instance(&text).unwrap(), inst);
    }

    /// `Π (1 - a_k/A) <= (1 - 1/r)^r < 1/e` for positive `a_k` summing to `A`.
    #[test]
    fn product_bound_below_inverse_e(a in proptest::collection::vec(1e-3f64..100.0, 1..30)) {
        let total: f64 = a.iter().sum();
        let r = a.len() as f64;
        let prod: f64 = a.iter().map(|x| 1.0 - x / total).product();
        let mean_bound = (1.0 - 1.0 / r).powf(r);
        prop_assert!(prod <= mean_bound + 1e-12);
        prop_assert!(mean_bound < (-1.0f64).exp());
    }
}
