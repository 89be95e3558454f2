//! Ratio benchmark: greedy variants against the oracle on generated instances.

use std::time::Instant;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Result, SapError};
use crate::generate::{random_data, rng_for, SizeModel};
use crate::instance::Instance;
use crate::io::instance_to_json;
use crate::oracle::exact_solve;
use crate::rational::{self, Rational};
use crate::solver::{solve_full, solve_half};
use rand::Rng;

/// Rational lower bound on `(1 - 1/e) / 2`.
pub fn half_bound() -> Rational {
    Rational::new(31_606_027.into(), 100_000_000.into())
}

/// Rational lower bound on `1 - 1/e`.
pub fn full_bound() -> Rational {
    Rational::new(63_212_055.into(), 100_000_000.into())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchParams {
    pub count: usize,
    pub min_students: usize,
    pub max_students: usize,
    pub min_seminars: usize,
    pub max_seminars: usize,
    pub size_model: SizeModel,
    pub p_max: u32,
    pub seed: u64,
    pub with_oracle: bool,
    pub oracle_budget: u128,
}

impl BenchParams {
    fn validate(&self) -> Result<()> {
        if self.min_seminars == 0 || self.min_students == 0 {
            return Err(SapError::InvalidParams(
                "instances need at least one student and one seminar".into(),
            ));
        }
        if self.min_students > self.max_students || self.min_seminars > self.max_seminars {
            return Err(SapError::InvalidParams("minimum exceeds maximum".into()));
        }
        if let SizeModel::Explicit { max_len } = self.size_model {
            if max_len < 2 {
                return Err(SapError::InvalidParams(
                    "explicit size sets need max_len >= 2".into(),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub index: usize,
    pub students: usize,
    pub seminars: usize,
    pub digest: String,
    pub opt: Option<String>,
    pub half: String,
    pub full: String,
    pub half_ratio: Option<String>,
    pub full_ratio: Option<String>,
    pub half_ms: f64,
    pub full_ms: f64,
    pub oracle_ms: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchSummary {
    pub instances: usize,
    pub min_half_ratio: Option<String>,
    pub min_full_ratio: Option<String>,
    pub mean_half_ratio: Option<String>,
    pub mean_full_ratio: Option<String>,
    pub half_bound: String,
    pub full_bound: String,
    pub violations: usize,
    pub total_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub summary: BenchSummary,
}

impl BenchReport {
    pub fn passed(&self) -> bool {
        self.summary.violations == 0
    }
}

/// `profit / opt`, with 1 when the optimum is 0.
pub fn ratio(profit: &Rational, opt: &Rational) -> Rational {
    if opt.is_zero() {
        Rational::one()
    } else {
        profit / opt
    }
}

fn digest(inst: &Instance) -> String {
    let hash = Sha256::digest(instance_to_json(inst).as_bytes());
    hash[..8].iter().map(|b| format!("{b:02x}")).collect()
}

pub fn bench_instance(params: &BenchParams, index: usize) -> Instance {
    let mut rng = rng_for(params.seed, index as u64);
    let n = rng.gen_range(params.min_students..=params.max_students);
    let m = rng.gen_range(params.min_seminars..=params.max_seminars);
    Instance::new(random_data(&mut rng, n, m, params.size_model, params.p_max))
        .expect("generated instances are valid")
}

struct Measured {
    row: BenchRow,
    ratios: Option<(Rational, Rational)>,
}

fn measure(params: &BenchParams, index: usize) -> Result<Measured> {
    let inst = bench_instance(params, index);
    let t = Instant::now();
    let half = solve_half(&inst);
    let half_ms = t.elapsed().as_secs_f64() * 1e3;
    let t = Instant::now();
    let full = solve_full(&inst);
    let full_ms = t.elapsed().as_secs_f64() * 1e3;

    let (opt, oracle_ms) = if params.with_oracle {
        let t = Instant::now();
        let r = exact_solve(&inst, params.oracle_budget)?;
        (Some(r.profit), Some(t.elapsed().as_secs_f64() * 1e3))
    } else {
        (None, None)
    };
    let ratios = opt
        .as_ref()
        .map(|o| (ratio(&half.profit, o), ratio(&full.profit, o)));
    Ok(Measured {
        row: BenchRow {
            index,
            students: inst.num_students(),
            seminars: inst.num_seminars(),
            digest: digest(&inst),
            opt: opt.as_ref().map(rational::format),
            half: rational::format(&half.profit),
            full: rational::format(&full.profit),
            half_ratio: ratios.as_ref().map(|r| rational::format(&r.0)),
            full_ratio: ratios.as_ref().map(|r| rational::format(&r.1)),
            half_ms,
            full_ms,
            oracle_ms,
        },
        ratios,
    })
}

/// Runs the benchmark; instances are solved in parallel, rows stay in index order.
pub fn run_bench(params: &BenchParams) -> Result<BenchReport> {
    params.validate()?;
    let started = Instant::now();
    let measured: Vec<Measured> = (0..params.count)
        .into_par_iter()
        .map(|i| measure(params, i))
        .collect::<Result<_>>()?;

    let ratios: Vec<&(Rational, Rational)> =
        measured.iter().filter_map(|m| m.ratios.as_ref()).collect();
    let (half_lo, full_lo) = (half_bound(), full_bound());
    let violations = ratios
        .iter()
        .filter(|(h, f)| *h < half_lo || *f < full_lo)
        .count();
    let stat = |pick: fn(&(Rational, Rational)) -> &Rational| {
        if ratios.is_empty() {
            return (None, None);
        }
        let min = ratios.iter().map(|r| pick(r)).min().cloned();
        let sum = ratios.iter().fold(Rational::zero(), |acc, r| acc + pick(r));
        let mean = sum / Rational::from_integer(ratios.len().into());
        (
            min.map(|v| rational::format(&v)),
            Some(rational::format(&mean)),
        )
    };
    let (min_half, mean_half) = stat(|r| &r.0);
    let (min_full, mean_full) = stat(|r| &r.1);

    Ok(BenchReport {
        rows: measured.into_iter().map(|m| m.row).collect(),
        summary: BenchSummary {
            instances: params.count,
            min_half_ratio: min_half,
            min_full_ratio: min_full,
            mean_half_ratio: mean_half,
            mean_full_ratio: mean_full,
            half_bound: rational::format(&half_lo),
            full_bound: rational::format(&full_lo),
            violations,
            total_ms: started.elapsed().as_secs_f64() * 1e3,
        },
    })
}
