//! Maximum Coverage and its embedding into seminar assignment.
//!
//! Each set becomes a seminar that takes either nobody or exactly `n`
//! students (`n` = universe size). Each element becomes a student with
//! profit 1 for the seminars of the sets containing it, and `n(k-1)` dummy
//! students with zero profits pad the student body to `k·n`, so at most `k`
//! seminars can open.

use std::collections::BTreeSet;
use std::ops::Range;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SapError};
use crate::instance::{Assignment, Instance, InstanceData, Seminar};
use crate::rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverageInstance {
    pub universe_size: usize,
    pub sets: Vec<Vec<usize>>,
    pub k: usize,
}

impl CoverageInstance {
    pub fn validate(&self) -> Result<()> {
        if self.universe_size == 0 {
            return Err(SapError::Degenerate("empty universe".into()));
        }
        if self.k == 0 {
            return Err(SapError::Degenerate("k must be at least 1".into()));
        }
        let mut covered = vec![false; self.universe_size];
        for (s, set) in self.sets.iter().enumerate() {
            for &e in set {
                if e >= self.universe_size {
                    return Err(SapError::InvalidParams(format!(
                        "set {s} contains element {e} outside the universe of {}",
                        self.universe_size
                    )));
                }
                covered[e] = true;
            }
        }
        if let Some(e) = covered.iter().position(|&c| !c) {
            return Err(SapError::InvalidParams(format!(
                "element {e} is not covered by any set"
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionMap {
    pub element_to_student: Vec<usize>,
    pub set_to_seminar: Vec<usize>,
    pub dummy_students: Range<usize>,
}

pub fn mc_to_sap(mc: &CoverageInstance) -> Result<(Instance, ReductionMap)> {
    mc.validate()?;
    let n = mc.universe_size;
    let m = mc.sets.len();
    let students = mc.k * n;

    let seminars = (0..m)
        .map(|s| Seminar::new(format!("S{s}"), vec![0, n]))
        .collect();
    let mut profits = vec![vec![rational::int(0); m]; students];
    for (s, set) in mc.sets.iter().enumerate() {
        for &e in set {
            profits[e][s] = rational::int(1);
        }
    }
    let inst = Instance::new(InstanceData {
        num_students: students,
        seminars,
        profits,
    })?;
    let map = ReductionMap {
        element_to_student: (0..n).collect(),
        set_to_seminar: (0..m).collect(),
        dummy_students: n..students,
    };
    Ok((inst, map))
}

/// Sets whose seminars received at least one student.
pub fn sap_solution_to_mc(map: &ReductionMap, a: &Assignment) -> Vec<usize> {
    let used: BTreeSet<usize> = a.iter().map(|(_, b)| b).collect();
    map.set_to_seminar
        .iter()
        .enumerate()
        .filter(|(_, b)| used.contains(b))
        .map(|(s, _)| s)
        .collect()
}

/// Size of the union of the chosen sets.
pub fn mc_coverage(mc: &CoverageInstance, chosen: &[usize]) -> Result<usize> {
    let mut covered = BTreeSet::new();
    for &s in chosen {
        let set = mc.sets.get(s).ok_or(SapError::IndexOutOfRange {
            what: "set",
            index: s,
            limit: mc.sets.len(),
        })?;
        covered.extend(set.iter().copied());
    }
    Ok(covered.len())
}

/// Optimum over all collections of at most `k` sets, and a witness.
pub fn mc_brute_force(mc: &CoverageInstance) -> (usize, Vec<usize>) {
    let mut best = (0, Vec::new());
    for size in 1..=mc.k.min(mc.sets.len()) {
        for chosen in (0..mc.sets.len()).combinations(size) {
            let c = mc_coverage(mc, &chosen).expect("indices in range");
            if c > best.0 {
                best = (c, chosen);
            }
        }
    }
    best
}
