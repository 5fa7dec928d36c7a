//! Algorithm dispatch, extrema scan, and full-universe sorting.
//!
//! The value sorters need every input word below the tag bit. Arbitrary
//! `w`-bit words are handled by splitting the array on bit `w - 1`, sorting
//! the low half directly and the high half shifted down by `2^(w-1)`.

use std::fmt;
use std::str::FromStr;

use crate::assoc_core::{sort_associative_recursive_with, sort_associative_with};
use crate::assoc_improved::{sort_distinct_improved_with, sort_improved_with};
use crate::cycle_leader::sort_distinct_keys_with;
use crate::error::SortError;
use crate::perm_sort::sort_by_key_with;
use crate::stats::{NoProbe, OpCounters, Phase, Probe};
use crate::word_model::{Word, WordConfig};

/// The sorting drivers, by the ids used on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    /// Distinct keys, implicit tagging by position.
    CycleDistinct,
    /// Associative sort, sequential passes.
    AssocSeq,
    /// Associative sort, recursion on the unsorted tail.
    AssocRec,
    /// Records-only storage with node-scan retrieval.
    AssocImproved,
    /// Distinct keys, bitmap records.
    DistinctImproved,
    /// Rank-sorting; on bare words it sorts the words.
    PermRank,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::CycleDistinct,
        Algorithm::AssocSeq,
        Algorithm::AssocRec,
        Algorithm::AssocImproved,
        Algorithm::DistinctImproved,
        Algorithm::PermRank,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Algorithm::CycleDistinct => "cycle_distinct",
            Algorithm::AssocSeq => "assoc_seq",
            Algorithm::AssocRec => "assoc_rec",
            Algorithm::AssocImproved => "assoc_improved",
            Algorithm::DistinctImproved => "distinct_improved",
            Algorithm::PermRank => "perm_rank",
        }
    }

    /// Whether the algorithm rejects repeated keys.
    pub fn requires_distinct(&self) -> bool {
        matches!(self, Algorithm::CycleDistinct | Algorithm::DistinctImproved)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = SortError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| SortError::UnknownAlgorithm(s.to_owned()))
    }
}

/// Sorts `s` ascending with `algo`. Words must lie below the tag bit.
pub fn sort_words(algo: Algorithm, s: &mut [Word], cfg: WordConfig) -> Result<OpCounters, SortError> {
    sort_words_with(algo, s, cfg, &mut NoProbe)
}

pub fn sort_words_with<P: Probe + ?Sized>(
    algo: Algorithm,
    s: &mut [Word],
    cfg: WordConfig,
    probe: &mut P,
) -> Result<OpCounters, SortError> {
    match algo {
        Algorithm::CycleDistinct => {
            cfg.check_input(s.iter().copied())?;
            sort_distinct_keys_with(s, probe)
        }
        Algorithm::AssocSeq => sort_associative_with(s, cfg, probe),
        Algorithm::AssocRec => sort_associative_recursive_with(s, cfg, probe),
        Algorithm::AssocImproved => sort_improved_with(s, cfg, probe),
        Algorithm::DistinctImproved => sort_distinct_improved_with(s, cfg, probe),
        Algorithm::PermRank => sort_by_key_with(s, cfg, probe),
    }
}

/// Minimum and maximum in one pass.
pub fn scan_min_max(s: &[Word]) -> Result<(Word, Word), SortError> {
    let (&first, rest) = s.split_first().ok_or(SortError::Empty)?;
    Ok(rest
        .iter()
        .fold((first, first), |(lo, hi), &x| (lo.min(x), hi.max(x))))
}

/// Moves words with the tag bit clear to the front. Returns their count.
pub fn partition_on_tag(s: &mut [Word], cfg: WordConfig, stats: &mut OpCounters) -> usize {
    let (mut lo, mut hi) = (0, s.len());
    loop {
        while lo < hi && !cfg.is_node(s[lo]) {
            lo += 1;
        }
        while lo < hi && cfg.is_node(s[hi - 1]) {
            hi -= 1;
        }
        if lo >= hi {
            return lo;
        }
        s.swap(lo, hi - 1);
        stats.moved(1);
        lo += 1;
        hi -= 1;
    }
}

/// Sorts arbitrary `w`-bit words.
pub fn sort_full_universe(s: &mut [Word], algo: Algorithm, cfg: WordConfig) -> Result<OpCounters, SortError> {
    sort_full_universe_with(s, algo, cfg, &mut NoProbe)
}

pub fn sort_full_universe_with<P: Probe + ?Sized>(
    s: &mut [Word],
    algo: Algorithm,
    cfg: WordConfig,
    probe: &mut P,
) -> Result<OpCounters, SortError> {
    if let Some((index, &word)) = s.iter().enumerate().find(|&(_, &x)| x > cfg.word_max()) {
        return Err(SortError::WordOutOfUniverse { index, word, width: cfg.width() });
    }
    let mut total = OpCounters::default();
    let split = partition_on_tag(s, cfg, &mut total);
    if probe.enabled() {
        probe.phase_done(0, Phase::Split, s);
    }
    let (low, high) = s.split_at_mut(split);
    let a = sort_words_with(algo, low, cfg, probe)?;
    for x in high.iter_mut() {
        *x &= cfg.value_mask();
    }
    let b = sort_words_with(algo, high, cfg, probe);
    for x in high.iter_mut() {
        *x |= cfg.tag_mask();
    }
    let b = b?;
    total.passes += a.passes + b.passes;
    total.moves += a.moves + b.moves + 2 * high.len() as u64;
    total.node_creations += a.node_creations + b.node_creations;
    Ok(total)
}
