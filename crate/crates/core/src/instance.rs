//! Data model: students, seminars with their allowed head-counts, profits,
//! seminar selections and assignments.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SapError};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Seminar {
    pub id: String,
    /// Allowed numbers of students, strictly increasing and containing 0.
    pub allowed_sizes: Vec<usize>,
}

impl Seminar {
    pub fn new(id: impl Into<String>, allowed_sizes: Vec<usize>) -> Self {
        Seminar {
            id: id.into(),
            allowed_sizes,
        }
    }

    pub fn allows(&self, k: usize) -> bool {
        self.allowed_sizes.binary_search(&k).is_ok()
    }
}

/// Unvalidated instance as read from or written to JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceData {
    pub num_students: usize,
    pub seminars: Vec<Seminar>,
    /// `profits[i][b]` is the profit of placing student `i` in seminar `b`.
    #[serde(with = "rational::matrix")]
    pub profits: Vec<Vec<Rational>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    ProfitRows {
        expected: usize,
        actual: usize,
    },
    ProfitColumns {
        student: usize,
        expected: usize,
        actual: usize,
    },
    NegativeProfit {
        student: usize,
        seminar: usize,
    },
    ZeroMissing {
        seminar: usize,
    },
    SizesNotIncreasing {
        seminar: usize,
    },
    SizeExceedsStudents {
        seminar: usize,
        size: usize,
        students: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ProfitRows { expected, actual } => {
                write!(f, "profit matrix has {actual} rows, expected {expected}")
            }
            Violation::ProfitColumns {
                student,
                expected,
                actual,
            } => write!(
                f,
                "profit row {student} has {actual} entries, expected {expected}"
            ),
            Violation::NegativeProfit { student, seminar } => {
                write!(
                    f,
                    "negative profit for student {student}, seminar {seminar}"
                )
            }
            Violation::ZeroMissing { seminar } => {
                write!(f, "seminar {seminar}: 0 missing from K_b")
            }
            Violation::SizesNotIncreasing { seminar } => {
                write!(
                    f,
                    "seminar {seminar}: allowed sizes not strictly increasing"
                )
            }
            Violation::SizeExceedsStudents {
                seminar,
                size,
                students,
            } => write!(
                f,
                "seminar {seminar}: allowed size {size} exceeds the {students} students"
            ),
        }
    }
}

/// Lists every broken invariant of `data`; `Ok(())` when there are none.
pub fn validate_instance(data: &InstanceData) -> std::result::Result<(), Vec<Violation>> {
    let n = data.num_students;
    let m = data.seminars.len();
    let mut out = Vec::new();

    if data.profits.len() != n {
        out.push(Violation::ProfitRows {
            expected: n,
            actual: data.profits.len(),
        });
    }
    for (i, row) in data.profits.iter().enumerate() {
        if row.len() != m {
            out.push(Violation::ProfitColumns {
                student: i,
                expected: m,
                actual: row.len(),
            });
        }
        for (b, p) in row.iter().enumerate() {
            if rational::is_negative(p) {
                out.push(Violation::NegativeProfit {
                    student: i,
                    seminar: b,
                });
            }
        }
    }
    for (b, sem) in data.seminars.iter().enumerate() {
        if !sem.allowed_sizes.contains(&0) {
            out.push(Violation::ZeroMissing { seminar: b });
        }
        if sem.allowed_sizes.windows(2).any(|w| w[0] >= w[1]) {
            out.push(Violation::SizesNotIncreasing { seminar: b });
        }
        if let Some(&size) = sem.allowed_sizes.iter().find(|&&k| k > n) {
            out.push(Violation::SizeExceedsStudents {
                seminar: b,
                size,
                students: n,
            });
        }
    }

    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// Profits rescaled by the least common denominator into machine integers.
/// Matching arithmetic runs on these; results convert back exactly.
#[derive(Clone, Debug)]
pub(crate) struct ScaledProfits {
    scale: i64,
    seminars: usize,
    weights: Vec<i64>,
}

impl ScaledProfits {
    fn new(profits: &[Vec<Rational>], seminars: usize) -> Result<Self> {
        let mut lcm = BigInt::one();
        for p in profits.iter().flatten() {
            lcm = lcm.lcm(p.denom());
        }
        let scale = lcm.to_i64().ok_or(SapError::ProfitScaleOverflow)?;
        let weights = profits
            .iter()
            .flatten()
            .map(|p| {
                (p.numer() * (&lcm / p.denom()))
                    .to_i64()
                    .ok_or(SapError::ProfitScaleOverflow)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ScaledProfits {
            scale,
            seminars,
            weights,
        })
    }

    #[inline]
    pub(crate) fn get(&self, student: usize, seminar: usize) -> i64 {
        self.weights[student * self.seminars + seminar]
    }
}

/// A validated instance. Immutable after construction.
#[derive(Clone, Debug)]
pub struct Instance {
    data: InstanceData,
    scaled: ScaledProfits,
}

impl PartialEq for Instance {
    fn eq(&self, other: &Self) -> bool {
        self.data == other.data
    }
}

impl Instance {
    pub fn new(data: InstanceData) -> Result<Self> {
        validate_instance(&data).map_err(SapError::InvalidInstance)?;
        let scaled = ScaledProfits::new(&data.profits, data.seminars.len())?;
        Ok(Instance { data, scaled })
    }

    /// Convenience constructor for integer profits; seminars get ids `b0, b1, ...`.
    pub fn from_int_profits(
        num_students: usize,
        allowed_sizes: Vec<Vec<usize>>,
        profits: Vec<Vec<i64>>,
    ) -> Result<Self> {
        let seminars = allowed_sizes
            .into_iter()
            .enumerate()
            .map(|(b, k)| Seminar::new(format!("b{b}"), k))
            .collect();
        let profits = profits
            .into_iter()
            .map(|row| row.into_iter().map(rational::int).collect())
            .collect();
        Instance::new(InstanceData {
            num_students,
            seminars,
            profits,
        })
    }

    pub fn data(&self) -> &InstanceData {
        &self.data
    }

    pub fn num_students(&self) -> usize {
        self.data.num_students
    }

    pub fn num_seminars(&self) -> usize {
        self.data.seminars.len()
    }

    pub fn seminars(&self) -> &[Seminar] {
        &self.data.seminars
    }

    pub fn seminar(&self, b: usize) -> &Seminar {
        &self.data.seminars[b]
    }

    pub fn profit(&self, student: usize, seminar: usize) -> &Rational {
        &self.data.profits[student][seminar]
    }

    /// True when every seminar has at most two allowed sizes, i.e. a single
    /// fixed nonzero head-count.
    pub fn is_fixed_size(&self) -> bool {
        self.seminars().iter().all(|s| s.allowed_sizes.len() <= 2)
    }

    /// Product of the allowed-size set cardinalities, saturating.
    pub fn selection_space(&self) -> u128 {
        self.seminars().iter().fold(1u128, |acc, s| {
            acc.saturating_mul(s.allowed_sizes.len() as u128)
        })
    }

    pub(crate) fn scaled(&self) -> &ScaledProfits {
        &self.scaled
    }

    pub(crate) fn unscale(&self, value: i128) -> Rational {
        rational::from_scaled(value, self.scaled.scale)
    }
}

/// Per-seminar head-counts `S(b)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SeminarSelection(Vec<usize>);

impl SeminarSelection {
    pub fn new(counts: Vec<usize>) -> Self {
        SeminarSelection(counts)
    }

    pub fn empty(num_seminars: usize) -> Self {
        SeminarSelection(vec![0; num_seminars])
    }

    pub fn counts(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn cost(&self) -> usize {
        selection_cost(self)
    }

    /// Number of seminars with a nonzero count.
    pub fn support(&self) -> usize {
        self.0.iter().filter(|&&c| c > 0).count()
    }
}

impl std::ops::Index<usize> for SeminarSelection {
    type Output = usize;
    fn index(&self, b: usize) -> &usize {
        &self.0[b]
    }
}

/// Partial map from student index to seminar index.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Assignment {
    map: BTreeMap<usize, usize>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        Assignment {
            map: pairs.into_iter().collect(),
        }
    }

    /// Builds from a dense `student -> Option<seminar>` table.
    pub fn from_dense(seminar_of: &[Option<usize>]) -> Self {
        Self::from_pairs(
            seminar_of
                .iter()
                .enumerate()
                .filter_map(|(i, b)| b.map(|b| (i, b))),
        )
    }

    pub fn assign(&mut self, student: usize, seminar: usize) -> Option<usize> {
        self.map.insert(student, seminar)
    }

    pub fn seminar_of(&self, student: usize) -> Option<usize> {
        self.map.get(&student).copied()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.map.iter().map(|(&i, &b)| (i, b))
    }

    fn check_range(&self, inst: &Instance) -> Result<()> {
        for (i, b) in self.iter() {
            if i >= inst.num_students() {
                return Err(SapError::IndexOutOfRange {
                    what: "student",
                    index: i,
                    limit: inst.num_students(),
                });
            }
            if b >= inst.num_seminars() {
                return Err(SapError::IndexOutOfRange {
                    what: "seminar",
                    index: b,
                    limit: inst.num_seminars(),
                });
            }
        }
        Ok(())
    }
}

pub fn selection_cost(s: &SeminarSelection) -> usize {
    s.counts().iter().sum()
}

pub fn is_feasible_selection(inst: &Instance, s: &SeminarSelection) -> Result<bool> {
    if s.len() != inst.num_seminars() {
        return Err(SapError::LengthMismatch {
            expected: inst.num_seminars(),
            actual: s.len(),
        });
    }
    let members = s
        .counts()
        .iter()
        .zip(inst.seminars())
        .all(|(&k, sem)| sem.allows(k));
    Ok(members && s.cost() <= inst.num_students())
}

pub fn assignment_profit(inst: &Instance, a: &Assignment) -> Result<Rational> {
    a.check_range(inst)?;
    Ok(a.iter()
        .fold(Rational::zero(), |acc, (i, b)| acc + inst.profit(i, b)))
}

pub fn selection_of_assignment(inst: &Instance, a: &Assignment) -> Result<SeminarSelection> {
    a.check_range(inst)?;
    let mut counts = vec![0; inst.num_seminars()];
    for (_, b) in a.iter() {
        counts[b] += 1;
    }
    Ok(SeminarSelection::new(counts))
}

pub fn is_feasible_assignment(inst: &Instance, a: &Assignment) -> Result<bool> {
    let s = selection_of_assignment(inst, a)?;
    Ok(s.counts()
        .iter()
        .zip(inst.seminars())
        .all(|(&k, sem)| sem.allows(k)))
}
