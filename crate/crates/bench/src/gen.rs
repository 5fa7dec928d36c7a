//! Deterministic input generators.
//!
//! Every array comes from a ChaCha8 stream whose 64-bit seed is a SplitMix64
//! mix of the user seed and the scenario coordinates, so each
//! `(seed, n, m, dist, trial)` cell is reproducible on any platform and
//! independent of which other cells were run.

use std::fmt;
use std::str::FromStr;

use assoc_sort::Word;
use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, Exp};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dist {
    Uniform,
    Exponential,
    Distinct,
}

impl Dist {
    pub const ALL: [Dist; 3] = [Dist::Uniform, Dist::Exponential, Dist::Distinct];

    pub fn as_str(&self) -> &'static str {
        match self {
            Dist::Uniform => "uniform",
            Dist::Exponential => "exponential",
            Dist::Distinct => "distinct",
        }
    }

    fn code(&self) -> u64 {
        match self {
            Dist::Uniform => 1,
            Dist::Exponential => 2,
            Dist::Distinct => 3,
        }
    }
}

impl fmt::Display for Dist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Dist {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Dist::ALL
            .into_iter()
            .find(|d| d.as_str() == s)
            .ok_or_else(|| GenError::UnknownDist(s.to_owned()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("range m must be at least 1")]
    EmptyRange,
    #[error("cannot draw {n} distinct values from a range of {m}")]
    RangeTooSmall { n: usize, m: Word },
    #[error("unknown distribution `{0}`")]
    UnknownDist(String),
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of the stream for one scenario cell.
pub fn cell_seed(seed: u64, n: usize, m: Word, dist: Dist, trial: u64) -> u64 {
    let mut state = seed;
    let mut out = splitmix64(&mut state);
    for part in [n as u64, m, dist.code(), trial] {
        state ^= part;
        out ^= splitmix64(&mut state);
    }
    out
}

pub fn stream(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` i.i.d. draws from `[0, m)`.
pub fn gen_uniform(n: usize, m: Word, seed: u64) -> Result<Vec<Word>, GenError> {
    if m == 0 {
        return Err(GenError::EmptyRange);
    }
    let mut rng = stream(seed);
    Ok((0..n).map(|_| rng.random_range(0..m)).collect())
}

/// Exponential draws with mean `m / 8`, floored and clamped to `[0, m)`.
pub fn gen_exponential(n: usize, m: Word, seed: u64) -> Result<Vec<Word>, GenError> {
    if m == 0 {
        return Err(GenError::EmptyRange);
    }
    let mut rng = stream(seed);
    let exp = Exp::new(8.0 / m as f64).expect("positive rate");
    Ok((0..n)
        .map(|_| {
            let x: f64 = exp.sample(&mut rng);
            (x as Word).min(m - 1)
        })
        .collect())
}

/// A uniformly random `n`-subset of `[0, m)` in random order.
pub fn gen_distinct(n: usize, m: Word, seed: u64) -> Result<Vec<Word>, GenError> {
    if m == 0 {
        return Err(GenError::EmptyRange);
    }
    if m < n as Word {
        return Err(GenError::RangeTooSmall { n, m });
    }
    let mut rng = stream(seed);
    let mut v: Vec<Word> = index::sample(&mut rng, m as usize, n)
        .into_iter()
        .map(|i| i as Word)
        .collect();
    v.shuffle(&mut rng);
    Ok(v)
}

pub fn generate(dist: Dist, n: usize, m: Word, seed: u64) -> Result<Vec<Word>, GenError> {
    match dist {
        Dist::Uniform => gen_uniform(n, m, seed),
        Dist::Exponential => gen_exponential(n, m, seed),
        Dist::Distinct => gen_distinct(n, m, seed),
    }
}
