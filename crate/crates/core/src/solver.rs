//! Top-level solvers: greedy from the empty selection, and greedy from
//! every feasible seed selection supported on at most three seminars.

use std::collections::HashMap;
use std::fmt;
use std::time::{Duration, Instant};

use itertools::Itertools;
use rayon::prelude::*;

use crate::error::Result;
use crate::greedy::{best_increment, greedy_from, GreedyTrace};
use crate::instance::{Assignment, Instance, SeminarSelection};
use crate::matching::{single_seminar_assignment, FlowState};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Greedy,
    Half,
    Full,
    Exact,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Greedy => "greedy",
            Algorithm::Half => "half",
            Algorithm::Full => "full",
            Algorithm::Exact => "exact",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    pub algorithm: Algorithm,
    pub profit: Rational,
    pub assignment: Assignment,
    /// Initial selection the winning greedy run started from.
    pub seed_selection: SeminarSelection,
    /// Head-counts of the returned assignment.
    pub selection: SeminarSelection,
    /// The single-seminar assignment beat the greedy's own selection.
    pub single_seminar_fallback: bool,
    pub trace: Option<GreedyTrace>,
    pub wall_time: Duration,
    pub seeds_evaluated: usize,
    /// Every seminar has a single nonzero allowed size.
    pub fixed_size: bool,
}

impl SolveReport {
    /// Equality ignoring `wall_time`.
    pub fn same_content(&self, other: &SolveReport) -> bool {
        SolveReport {
            wall_time: Duration::ZERO,
            ..self.clone()
        } == SolveReport {
            wall_time: Duration::ZERO,
            ..other.clone()
        }
    }
}

pub const DEFAULT_SEED_SUPPORT: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    /// Largest seed support enumerated by [`solve_full_with`].
    pub max_support: usize,
    /// Evaluate seeds independently on the rayon pool instead of sharing
    /// greedy transitions through a memo table.
    pub parallel: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_support: DEFAULT_SEED_SUPPORT,
            parallel: false,
        }
    }
}

/// Every feasible selection with at most `max_support` nonzero seminars,
/// each exactly once: by support size, then support set lexicographically,
/// then counts lexicographically. The empty selection comes first.
pub fn enumerate_seed_selections(
    inst: &Instance,
    max_support: usize,
) -> impl Iterator<Item = SeminarSelection> + '_ {
    let m = inst.num_seminars();
    let n = inst.num_students();
    std::iter::once(SeminarSelection::empty(m)).chain((1..=max_support.min(m)).flat_map(
        move |size| {
            (0..m).combinations(size).flat_map(move |support| {
                support
                    .iter()
                    .map(|&b| {
                        inst.seminar(b)
                            .allowed_sizes
                            .iter()
                            .copied()
                            .filter(|&k| k > 0)
                            .collect::<Vec<_>>()
                    })
                    .multi_cartesian_product()
                    .filter(move |ks| ks.iter().sum::<usize>() <= n)
                    .map(move |ks| {
                        let mut counts = vec![0; m];
                        for (&b, k) in support.iter().zip(ks) {
                            counts[b] = k;
                        }
                        SeminarSelection::new(counts)
                    })
            })
        },
    ))
}

/// Greedy from the empty selection.
pub fn solve_half(inst: &Instance) -> SolveReport {
    let mut report = greedy_from(inst, &SeminarSelection::empty(inst.num_seminars()))
        .expect("empty selection is feasible");
    report.algorithm = Algorithm::Half;
    report
}

/// Greedy from every seed of support at most three; best report wins,
/// ties to the earliest seed.
pub fn solve_full(inst: &Instance) -> SolveReport {
    solve_full_with(inst, SolverConfig::default())
}

pub fn solve_full_with(inst: &Instance, config: SolverConfig) -> SolveReport {
    let started = Instant::now();
    let seeds: Vec<SeminarSelection> =
        enumerate_seed_selections(inst, config.max_support).collect();

    let winner = if config.parallel {
        seeds
            .par_iter()
            .enumerate()
            .map(|(idx, seed)| {
                let r = greedy_from(inst, seed).expect("seeds are feasible");
                (idx, r.profit)
            })
            .reduce_with(pick_better)
    } else {
        let mut memo = OutcomeMemo::new(inst);
        seeds
            .iter()
            .enumerate()
            .map(|(idx, seed)| (idx, memo.seed_profit(seed)))
            .reduce(pick_better)
    };
    let (idx, _) = winner.expect("the empty seed is always present");

    let mut report = greedy_from(inst, &seeds[idx]).expect("seeds are feasible");
    report.algorithm = Algorithm::Full;
    report.seeds_evaluated = seeds.len();
    report.wall_time = started.elapsed();
    report
}

/// Oracle solve wrapped as a report.
pub fn solve_exact(inst: &Instance, budget: u128) -> Result<SolveReport> {
    let started = Instant::now();
    let r = crate::oracle::exact_solve(inst, budget)?;
    Ok(SolveReport {
        algorithm: Algorithm::Exact,
        profit: r.profit,
        assignment: r.assignment,
        seed_selection: SeminarSelection::empty(inst.num_seminars()),
        selection: r.selection,
        single_seminar_fallback: false,
        trace: None,
        wall_time: started.elapsed(),
        seeds_evaluated: r.selections_enumerated,
        fixed_size: inst.is_fixed_size(),
    })
}

fn pick_better(a: (usize, Rational), b: (usize, Rational)) -> (usize, Rational) {
    if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) {
        b
    } else {
        a
    }
}

/// Shares greedy work between seeds. The greedy's next selection depends on
/// the current selection only, so runs that meet continue identically.
struct OutcomeMemo<'a> {
    inst: &'a Instance,
    /// Selection -> scaled optimal profit of the selection the greedy ends at.
    terminal: HashMap<Vec<usize>, i128>,
    single_best: Vec<Rational>,
}

impl<'a> OutcomeMemo<'a> {
    fn new(inst: &'a Instance) -> Self {
        let single_best = (0..inst.num_seminars())
            .map(|b| {
                single_seminar_assignment(inst, b)
                    .expect("seminar in range")
                    .1
            })
            .collect();
        OutcomeMemo {
            inst,
            terminal: HashMap::new(),
            single_best,
        }
    }

    fn seed_profit(&mut self, seed: &SeminarSelection) -> Rational {
        let mut state = FlowState::for_counts(self.inst, seed.counts());
        let mut path = Vec::new();
        let end = loop {
            let key = state.counts().to_vec();
            if let Some(&v) = self.terminal.get(&key) {
                break v;
            }
            path.push(key);
            match best_increment(self.inst, &state) {
                Some(mv) => state = mv.state,
                None => break state.value(),
            }
        };
        for key in path {
            self.terminal.insert(key, end);
        }

        let primary = self.inst.unscale(end);
        let fallback = (0..self.inst.num_seminars())
            .filter(|&b| seed[b] == 0)
            .map(|b| &self.single_best[b])
            .max();
        match fallback {
            Some(f) if *f > primary => f.clone(),
            _ => primary,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn sel(v: &[usize]) -> SeminarSelection {
        SeminarSelection::new(v.to_vec())
    }

    fn three_by_two() -> Instance {
        Instance::from_int_profits(
            3,
            vec![vec![0, 1], vec![0, 2]],
            vec![vec![5, 4], vec![3, 4], vec![1, 2]],
        )
        .unwrap()
    }

    #[test]
    fn seed_enumeration_examples() {
        let inst = three_by_two();
        let s1: Vec<_> = enumerate_seed_selections(&inst, 1).collect();
        assert_eq!(s1, vec![sel(&[0, 0]), sel(&[1, 0]), sel(&[0, 2])]);
        let s2: Vec<_> = enumerate_seed_selections(&inst, 2).collect();
        assert_eq!(
            s2,
            vec![sel(&[0, 0]), sel(&[1, 0]), sel(&[0, 2]), sel(&[1, 2])]
        );
        let s0: Vec<_> = enumerate_seed_selections(&inst, 0).collect();
        assert_eq!(s0, vec![sel(&[0, 0])]);
    }

    #[test]
    fn seed_enumeration_skips_over_budget() {
        let inst =
            Instance::from_int_profits(4, vec![vec![0, 2, 3], vec![0, 2]], vec![vec![0, 0]; 4])
                .unwrap();
        let all: Vec<_> = enumerate_seed_selections(&inst, 3).collect();
        assert_eq!(
            all,
            vec![
                sel(&[0, 0]),
                sel(&[2, 0]),
                sel(&[3, 0]),
                sel(&[0, 2]),
                sel(&[2, 2])
            ]
        );
    }

    #[test]
    fn half_on_three_by_two() {
        let r = solve_half(&three_by_two());
        assert_eq!(r.algorithm, Algorithm::Half);
        assert_eq!(r.profit, int(11));
    }

    #[test]
    fn all_zero_profit_half() {
        let inst = Instance::from_int_profits(2, vec![vec![0, 1]], vec![vec![0], vec![0]]).unwrap();
        assert_eq!(solve_half(&inst).profit, int(0));
    }

    #[test]
    fn single_full_size_seminar() {
        let inst = Instance::from_int_profits(3, vec![vec![0, 3]], vec![vec![4], vec![1], vec![2]])
            .unwrap();
        assert_eq!(solve_half(&inst).profit, int(7));
        assert_eq!(solve_full(&inst).profit, int(7));
    }

    #[test]
    fn full_reports_winning_seed() {
        let inst = Instance::from_int_profits(
            3,
            vec![vec![0, 1], vec![0, 3]],
            vec![vec![10, 9], vec![0, 9], vec![0, 9]],
        )
        .unwrap();
        let r = solve_full(&inst);
        assert_eq!(r.profit, int(27));
        assert_eq!(r.seeds_evaluated, 3);
        // The empty seed reaches 27 via the single-seminar fallback.
        assert_eq!(r.seed_selection, sel(&[0, 0]));
        assert!(r.single_seminar_fallback);
    }

    #[test]
    fn memo_and_parallel_agree() {
        let inst = Instance::from_int_profits(
            5,
            vec![vec![0, 1, 3], vec![0, 2], vec![0, 1, 2, 4], vec![0, 2, 3]],
            vec![
                vec![3, 1, 4, 1],
                vec![5, 9, 2, 6],
                vec![5, 3, 5, 8],
                vec![9, 7, 9, 3],
                vec![2, 3, 8, 4],
            ],
        )
        .unwrap();
        let a = solve_full_with(&inst, SolverConfig::default());
        let b = solve_full_with(
            &inst,
            SolverConfig {
                parallel: true,
                ..Default::default()
            },
        );
        assert!(a.same_content(&b));
    }
}
