//! In-place associative permutation sort: rank-sorting of elements by key.
//!
//! One pass over a segment of `n` elements with minimum key `delta`:
//!
//! 1. **Practice** `[delta, delta + n)` exactly as the value sorter does,
//!    swapping whole elements; a node replaces only the key word of the
//!    element that settles on its hash slot.
//! 2. **Accumulate** the node counts left to right, so each record holds the
//!    index of the last element of its value block.
//! 3. **Re-practice** idle elements: each takes its node's record as its
//!    *ticket* (destination) and decrements it. Afterwards node records are
//!    the block starts and tickets fill the rest of `[0, n_d + n_c)`.
//! 4. **Reactivate** with a cycle leader permutation driven by idle and
//!    out-of-interval elements. Whenever one of them displaces a node, an
//!    inner cycle carries nodes to their destinations and overwrites each
//!    record with the node's former (hash) position.
//! 5. **Restore** keys: every node's record unhashes to its key, which is
//!    copied over the node and the idle elements following it.
//!
//! Passes repeat on the out-of-interval tail. After each pass the sorted
//! prefix is final, so results can be consumed while later passes run.

use crate::assoc_core::{practice, PracticeSummary};
use crate::element::{keys_of, KeySlot};
use crate::error::SortError;
use crate::stats::{NoProbe, OpCounters, Phase, Probe};
use crate::word_model::{Interval, Word, WordConfig};

/// Practicing for elements. Same contract as [`practice`] with `base = 0`.
pub fn practice_rank<T: KeySlot>(
    s: &mut [T],
    iv: Interval,
    cfg: WordConfig,
    stats: &mut OpCounters,
) -> PracticeSummary {
    debug_assert_eq!(iv.base, 0);
    practice(s, iv, cfg, stats)
}

/// Replaces node counts by running totals minus one.
pub fn accumulate_records<T: KeySlot>(s: &mut [T], nodes: usize, cfg: WordConfig) {
    let mut total: Word = 0;
    let mut seen = 0;
    for slot in s.iter_mut() {
        if seen == nodes {
            break;
        }
        let x = slot.key();
        if cfg.is_node(x) {
            total += cfg.decode_record(x) + 1;
            slot.set_key(cfg.node(total - 1));
            seen += 1;
        }
    }
}

/// Hands every idle element its destination index.
pub fn repractice_idle<T: KeySlot>(
    s: &mut [T],
    iv: Interval,
    cfg: WordConfig,
    stats: &mut OpCounters,
) -> Result<(), SortError> {
    for i in 0..s.len() {
        let x = s[i].key();
        if cfg.is_node(x) {
            continue;
        }
        let Some(j) = iv.linear_hash(x) else {
            continue;
        };
        let node = s[j].key();
        if !cfg.is_node(node) {
            return Err(SortError::Corrupt("idle key hashes to an untagged slot"));
        }
        let ticket = cfg.decode_record(node);
        if ticket == 0 {
            return Err(SortError::Corrupt("node record exhausted"));
        }
        s[i].set_key(ticket);
        s[j].set_key(cfg.node(ticket - 1));
        stats.moved(1);
    }
    Ok(())
}

/// Moves every element with a destination below `n_sorted` there, packing
/// out-of-interval elements into `s[n_sorted..]`.
///
/// On return each node's record is its position before reactivation.
pub fn reactivate<T: KeySlot>(
    s: &mut [T],
    n_sorted: usize,
    cfg: WordConfig,
    stats: &mut OpCounters,
) -> Result<(), SortError> {
    let n = s.len();
    // Next free slot for an out-of-interval element; [n_sorted, k) is settled.
    let mut k = n_sorted;
    // Each swap settles one element for good.
    let budget = 2 * n as u64 + 1;
    let start_moves = stats.moves;
    let mut i = 0;
    while i < n {
        if stats.moves - start_moves > budget {
            return Err(SortError::Corrupt("reactivation does not terminate"));
        }
        let x = s[i].key();
        if cfg.is_node(x) {
            i += 1;
            continue;
        }
        let from = if x < n_sorted as Word {
            let t = x as usize;
            if t == i {
                i += 1;
                continue;
            }
            let there = s[t].key();
            if !cfg.is_node(there) && there == t as Word {
                return Err(SortError::Corrupt("cycle revisits a settled index"));
            }
            s.swap(i, t);
            stats.moved(1);
            t
        } else {
            if i >= n_sorted && i < k {
                i += 1;
                continue;
            }
            if i == k {
                k += 1;
                i += 1;
                continue;
            }
            if k >= n {
                return Err(SortError::Corrupt("too many out-of-interval elements"));
            }
            s.swap(i, k);
            stats.moved(1);
            k += 1;
            k - 1
        };
        // Inner cycle: carry displaced nodes home, logging where they were.
        let mut from = from;
        while cfg.is_node(s[i].key()) {
            let dest = cfg.decode_record(s[i].key()) as usize;
            if dest >= n_sorted {
                return Err(SortError::Corrupt("node destination outside sorted prefix"));
            }
            if dest == i {
                s[i].set_key(cfg.node(from as Word));
                break;
            }
            s.swap(i, dest);
            s[dest].set_key(cfg.node(from as Word));
            stats.moved(1);
            from = dest;
        }
    }
    if k != n {
        return Err(SortError::Corrupt("out-of-interval count mismatch"));
    }
    Ok(())
}

/// Rewrites the keys of the sorted prefix from the node cues.
pub fn restore_keys<T: KeySlot>(
    s: &mut [T],
    n_sorted: usize,
    iv: Interval,
    cfg: WordConfig,
    stats: &mut OpCounters,
) -> Result<(), SortError> {
    let mut current = None;
    for slot in &mut s[..n_sorted] {
        let x = slot.key();
        if cfg.is_node(x) {
            let pos = cfg.decode_record(x) as usize;
            if pos >= iv.span {
                return Err(SortError::Corrupt("node cue outside the interval"));
            }
            current = Some(iv.linear_unhash(pos));
        }
        let key = current.ok_or(SortError::Corrupt("idle element before any node"))?;
        slot.set_key(key);
        stats.moved(1);
    }
    Ok(())
}

/// Outcome of one pass of [`sort_pass`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PassOutcome {
    /// Elements now final at the front of the segment.
    pub sorted: usize,
    /// Minimum key of the remaining tail.
    pub next_delta: Option<Word>,
}

/// Runs all five phases once on `s` with minimum key `delta`.
pub fn sort_pass<T: KeySlot>(
    s: &mut [T],
    delta: Word,
    cfg: WordConfig,
    stats: &mut OpCounters,
) -> Result<PassOutcome, SortError> {
    sort_pass_observed(s, delta, cfg, stats, &mut |_, _| {})
}

fn sort_pass_observed<T: KeySlot>(
    s: &mut [T],
    delta: Word,
    cfg: WordConfig,
    stats: &mut OpCounters,
    after: &mut dyn FnMut(Phase, &[T]),
) -> Result<PassOutcome, SortError> {
    let iv = Interval::new(delta, s.len(), 0);
    let sum = practice_rank(s, iv, cfg, stats);
    after(Phase::Practice, s);
    accumulate_records(s, sum.nodes, cfg);
    after(Phase::Accumulate, s);
    repractice_idle(s, iv, cfg, stats)?;
    after(Phase::Repractice, s);
    let sorted = sum.practiced();
    reactivate(s, sorted, cfg, stats)?;
    after(Phase::Reactivate, s);
    restore_keys(s, sorted, iv, cfg, stats)?;
    after(Phase::Restore, s);
    Ok(PassOutcome {
        sorted,
        next_delta: sum.min_unpracticed,
    })
}

/// Sorts elements by key.
pub fn sort_by_key<T: KeySlot>(s: &mut [T], cfg: WordConfig) -> Result<OpCounters, SortError> {
    sort_by_key_with(s, cfg, &mut NoProbe)
}

pub fn sort_by_key_with<T: KeySlot, P: Probe + ?Sized>(
    s: &mut [T],
    cfg: WordConfig,
    probe: &mut P,
) -> Result<OpCounters, SortError> {
    cfg.check_input(s.iter().map(KeySlot::key))?;
    let mut stats = OpCounters::default();
    let Some(min) = s.iter().map(KeySlot::key).min() else {
        return Ok(stats);
    };
    let tracing = probe.enabled();
    let mut delta = min;
    let mut start = 0;
    while start < s.len() {
        stats.passes += 1;
        let pass = stats.passes;
        let outcome = if tracing {
            // Snapshots only see the segment; pad with the finished prefix.
            let prefix = keys_of(&s[..start]);
            sort_pass_observed(&mut s[start..], delta, cfg, &mut stats, &mut |phase, seg| {
                let mut words = prefix.clone();
                words.extend(seg.iter().map(KeySlot::key));
                probe.phase_done(pass, phase, &words);
            })?
        } else {
            sort_pass(&mut s[start..], delta, cfg, &mut stats)?
        };
        start += outcome.sorted;
        match outcome.next_delta {
            Some(d) => delta = d,
            None => break,
        }
    }
    Ok(stats)
}
