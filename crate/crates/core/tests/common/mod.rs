#![allow(dead_code)]

use assoc_sort::{Algorithm, Word};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(r: &mut ChaCha8Rng, n: usize, m: Word) -> Vec<Word> {
    (0..n).map(|_| r.random_range(0..m)).collect()
}

pub fn distinct(r: &mut ChaCha8Rng, n: usize, m: Word) -> Vec<Word> {
    assert!(m >= n as Word);
    if m <= 4 * n as Word {
        let mut all: Vec<Word> = (0..m).collect();
        all.shuffle(r);
        all.truncate(n);
        return all;
    }
    let mut set = std::collections::BTreeSet::new();
    while set.len() < n {
        set.insert(r.random_range(0..m));
    }
    let mut v: Vec<Word> = set.into_iter().collect();
    v.shuffle(r);
    v
}

pub fn sorted(v: &[Word]) -> Vec<Word> {
    let mut o = v.to_vec();
    o.sort();
    o
}

fn clog2(n: u128) -> u32 {
    let mut p = 0;
    while (1u128 << p) < n {
        p += 1;
    }
    p
}

/// Reserved prefix of the original variant for a segment of `n` at width `w`,
/// computed from scratch: the larger of the closed-form reserve and the
/// number of values that can overflow the packed count.
pub fn model_offset(n: usize, w: u32) -> usize {
    let n = n as u128;
    let p = clog2(n);
    let closed = if 2 * p < w { 0 } else { n.div_ceil(1u128 << (w - p)) };
    let threshold = 1u128 << (w - 1 - p);
    let demand = n / (threshold + 1);
    closed.max(demand) as usize
}

/// How many keys a pass over a segment of `n_cur` covers, starting at its minimum.
fn span(algo: Algorithm, n_cur: usize, w: u32) -> u128 {
    match algo {
        Algorithm::AssocSeq | Algorithm::AssocRec => (n_cur - model_offset(n_cur, w)) as u128,
        Algorithm::DistinctImproved => (w as u128 - 1) * n_cur as u128,
        _ => n_cur as u128,
    }
}

/// Passes and per-pass prefix growth predicted by interval coverage.
pub fn pass_model(algo: Algorithm, input: &[Word], w: u32) -> Vec<usize> {
    let keys = sorted(input);
    let mut lo = 0;
    let mut growth = Vec::new();
    while lo < keys.len() {
        let n_cur = keys.len() - lo;
        let end = keys[lo] as u128 + span(algo, n_cur, w);
        let hi = lo + keys[lo..].partition_point(|&k| (k as u128) < end);
        growth.push(hi - lo);
        lo = hi;
    }
    growth
}
