//! Seeded random instance generators.

use rand::seq::index;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, SapError};
use crate::instance::{Instance, InstanceData, Seminar};
use crate::rational;
use crate::reduction::CoverageInstance;

/// How allowed-size sets are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SizeModel {
    /// `{0} ∪ {l, ..., u}` with random `1 <= l <= u <= n`.
    Interval,
    /// `{0}` plus a random set of distinct positive sizes, at most `max_len` values in total.
    Explicit { max_len: usize },
    /// `{0, k}` with a random `1 <= k <= n`.
    Fixed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenParams {
    pub num_students: usize,
    pub num_seminars: usize,
    pub size_model: SizeModel,
    /// Profits are uniform integers in `0..=p_max`.
    pub p_max: u32,
    pub seed: u64,
}

impl GenParams {
    pub fn validate(&self) -> Result<()> {
        if self.num_seminars == 0 {
            return Err(SapError::InvalidParams(
                "num_seminars must be at least 1".into(),
            ));
        }
        if self.num_students == 0 {
            return Err(SapError::InvalidParams(
                "num_students must be at least 1".into(),
            ));
        }
        if let SizeModel::Explicit { max_len } = self.size_model {
            if max_len < 2 {
                return Err(SapError::InvalidParams(
                    "explicit size sets need room for 0 and one positive size".into(),
                ));
            }
        }
        Ok(())
    }
}

pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn generate(params: &GenParams) -> Result<Instance> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    Instance::new(random_data(
        &mut rng,
        params.num_students,
        params.num_seminars,
        params.size_model,
        params.p_max,
    ))
}

pub fn random_allowed_sizes<R: Rng>(rng: &mut R, n: usize, model: SizeModel) -> Vec<usize> {
    if n == 0 {
        return vec![0];
    }
    match model {
        SizeModel::Interval => {
            let l = rng.gen_range(1..=n);
            let u = rng.gen_range(l..=n);
            std::iter::once(0).chain(l..=u).collect()
        }
        SizeModel::Explicit { max_len } => {
            let extra = rng.gen_range(1..=(max_len - 1).min(n));
            let mut sizes: Vec<usize> = index::sample(rng, n, extra)
                .into_iter()
                .map(|k| k + 1)
                .collect();
            sizes.push(0);
            sizes.sort_unstable();
            sizes
        }
        SizeModel::Fixed => vec![0, rng.gen_range(1..=n)],
    }
}

pub fn random_data<R: Rng>(
    rng: &mut R,
    num_students: usize,
    num_seminars: usize,
    model: SizeModel,
    p_max: u32,
) -> InstanceData {
    let seminars = (0..num_seminars)
        .map(|b| {
            Seminar::new(
                format!("b{b}"),
                random_allowed_sizes(rng, num_students, model),
            )
        })
        .collect();
    let profits = (0..num_students)
        .map(|_| {
            (0..num_seminars)
                .map(|_| rational::int(rng.gen_range(0..=p_max) as i64))
                .collect()
        })
        .collect();
    InstanceData {
        num_students,
        seminars,
        profits,
    }
}

/// Random instance with `1..=max_students` students and `1..=max_seminars` seminars.
pub fn random_small_instance<R: Rng>(
    rng: &mut R,
    max_students: usize,
    max_seminars: usize,
    model: SizeModel,
    p_max: u32,
) -> Instance {
    let n = rng.gen_range(1..=max_students);
    let m = rng.gen_range(1..=max_seminars);
    Instance::new(random_data(rng, n, m, model, p_max)).expect("generated instances are valid")
}

/// Random coverage instance with every element covered.
pub fn random_coverage<R: Rng>(
    rng: &mut R,
    max_sets: usize,
    max_universe: usize,
    max_k: usize,
) -> CoverageInstance {
    let n = rng.gen_range(1..=max_universe);
    let m = rng.gen_range(1..=max_sets);
    let mut sets: Vec<Vec<usize>> = (0..m)
        .map(|_| (0..n).filter(|_| rng.gen_bool(0.4)).collect())
        .collect();
    for e in 0..n {
        if !sets.iter().any(|s| s.contains(&e)) {
            let s = rng.gen_range(0..m);
            sets[s].push(e);
            sets[s].sort_unstable();
        }
    }
    CoverageInstance {
        universe_size: n,
        sets,
        k: rng.gen_range(1..=max_k),
    }
}
