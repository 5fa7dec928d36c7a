//! Cycle leader permutation and the distinct-key sorter built on it.
//!
//! With distinct keys, a key `x` sitting at index `x - delta` marks itself;
//! no tag bit is needed. Each pass sends every key of
//! `[delta, delta + n)` home by following permutation cycles, gathers those
//! fixpoints at the front, and repeats on the remaining tail with `delta`
//! set to the smallest key that did not fit.

use crate::error::SortError;
use crate::stats::{NoProbe, OpCounters, Phase, Probe};
use crate::word_model::Word;

/// Sorts a permutation of `[delta, delta + n)` by following its cycles.
///
/// The input must be exactly such a permutation; other inputs are caught by
/// a debug assertion.
pub fn cycle_leader_permute(s: &mut [Word], delta: Word) {
    let n = s.len();
    for i in 0..n {
        loop {
            let j = (s[i] - delta) as usize;
            if j == i {
                break;
            }
            debug_assert!(j < n && s[j] != s[i], "not a permutation of the range");
            s.swap(i, j);
        }
    }
}

/// Result of [`implicit_practice_pass`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ImplicitPass {
    /// Keys now sitting at `key - delta`.
    pub practiced: usize,
    /// Smallest key with `key - delta >= n`.
    pub next_delta: Option<Word>,
}

/// Sends every key of `[delta, delta + n)` to index `key - delta`.
///
/// Keys outside the interval are left wherever the cycles drop them.
pub fn implicit_practice_pass(
    s: &mut [Word],
    delta: Word,
    stats: &mut OpCounters,
) -> Result<ImplicitPass, SortError> {
    let n = s.len();
    let mut next_delta: Option<Word> = None;
    for i in 0..n {
        loop {
            let x = s[i];
            let d = x.checked_sub(delta).ok_or(SortError::Corrupt("key below delta"))?;
            if d >= n as Word {
                next_delta = Some(next_delta.map_or(x, |m| m.min(x)));
                break;
            }
            let j = d as usize;
            if j == i {
                break;
            }
            if s[j] == x {
                return Err(SortError::DuplicateKey { key: x });
            }
            s.swap(i, j);
            stats.moved(1);
        }
    }
    let practiced = s
        .iter()
        .enumerate()
        .filter(|&(i, &x)| x.wrapping_sub(delta) == i as Word)
        .count();
    Ok(ImplicitPass {
        practiced,
        next_delta: if practiced == n { None } else { next_delta },
    })
}

/// Moves the keys satisfying `s[i] - delta == i` to the front, in order.
///
/// Returns how many there were.
pub fn partition_practiced(s: &mut [Word], delta: Word, stats: &mut OpCounters) -> usize {
    let mut write = 0;
    for i in 0..s.len() {
        if s[i].wrapping_sub(delta) == i as Word {
            if write != i {
                s.swap(i, write);
                stats.moved(1);
            }
            write += 1;
        }
    }
    write
}

/// Sorts distinct keys in place.
///
/// Duplicates that meet inside one pass are reported as
/// [`SortError::DuplicateKey`].
pub fn sort_distinct_keys(s: &mut [Word]) -> Result<OpCounters, SortError> {
    sort_distinct_keys_with(s, &mut NoProbe)
}

pub fn sort_distinct_keys_with<P: Probe + ?Sized>(
    s: &mut [Word],
    probe: &mut P,
) -> Result<OpCounters, SortError> {
    let mut stats = OpCounters::default();
    let Some(&first_min) = s.iter().min() else {
        return Ok(stats);
    };
    let mut start = 0;
    let mut delta = first_min;
    while start < s.len() {
        stats.passes += 1;
        let seg = &mut s[start..];
        let pass = implicit_practice_pass(seg, delta, &mut stats)?;
        if probe.enabled() {
            probe.phase_done(stats.passes, Phase::Practice, s);
        }
        let seg = &mut s[start..];
        let placed = partition_practiced(seg, delta, &mut stats);
        debug_assert_eq!(placed, pass.practiced);
        if probe.enabled() {
            probe.phase_done(stats.passes, Phase::Partition, s);
        }
        start += placed;
        match pass.next_delta {
            Some(d) => delta = d,
            None => break,
        }
    }
    Ok(stats)
}
