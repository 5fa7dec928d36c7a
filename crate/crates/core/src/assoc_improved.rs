//! Improved associative sort and its distinct-key specialization.
//!
//! Nodes never move. Only their records are gathered at the front, by
//! exchanging the low `w - 1` bits of two words while both tag bits stay
//! where they are. The tag bits therefore keep marking node positions, and
//! the record block `s[0..n_d]` lines up with them one to one. Because no
//! position has to be stored, the whole interval `[delta, delta + n)` is
//! practiced on every pass.
//!
//! Everything after practicing works on the *value layer* (the low bits):
//! partitioning, and the right-to-left expansion that writes keys while it
//! scans the tags for the next node.
//!
//! The distinct-key variant widens each node to a bitmap: key `x` maps to
//! node `(x - delta) / (w - 1)` and bit `(x - delta) % (w - 1)`, so one pass
//! covers `(w - 1) * n` key values.

use crate::assoc_core::{practice, PracticeSummary};
use crate::error::SortError;
use crate::stats::{NoProbe, OpCounters, Phase, Probe};
use crate::word_model::{super_hash, Interval, Word, WordConfig};

#[inline]
fn swap_low(s: &mut [Word], a: usize, b: usize, cfg: WordConfig) {
    if a != b {
        let (x, y) = (s[a], s[b]);
        s[a] = cfg.with_low_bits(x, y);
        s[b] = cfg.with_low_bits(y, x);
    }
}

/// Gathers the records of the first `nodes` nodes into the low bits of
/// `s[0..nodes]`, in node order. Tag bits are untouched.
pub fn store_records(
    s: &mut [Word],
    nodes: usize,
    cfg: WordConfig,
    stats: &mut OpCounters,
) -> Result<(), SortError> {
    let mut k = 0;
    for p in 0..s.len() {
        if k == nodes {
            break;
        }
        if cfg.is_node(s[p]) {
            if k != p {
                swap_low(s, k, p, cfg);
                stats.moved(1);
            }
            k += 1;
        }
    }
    if k != nodes {
        return Err(SortError::Corrupt("fewer tagged words than nodes"));
    }
    Ok(())
}

/// Value-layer partition of `s[start..]` around `pivot`; returns the number
/// of low values `<= pivot`.
pub fn partition_values(
    s: &mut [Word],
    start: usize,
    pivot: Word,
    cfg: WordConfig,
    stats: &mut OpCounters,
) -> usize {
    let mut lo = start;
    let mut hi = s.len();
    while lo < hi {
        if cfg.decode_record(s[lo]) <= pivot {
            lo += 1;
        } else {
            hi -= 1;
            swap_low(s, lo, hi, cfg);
            stats.moved(1);
        }
    }
    lo - start
}

/// Scans right to left for node `k`'s tag, clearing it. Returns its index.
#[inline]
fn next_node(s: &mut [Word], scan: &mut usize, cfg: WordConfig) -> Result<usize, SortError> {
    while *scan > 0 {
        *scan -= 1;
        if cfg.is_node(s[*scan]) {
            s[*scan] = cfg.decode_record(s[*scan]);
            return Ok(*scan);
        }
    }
    Err(SortError::Corrupt("fewer tagged words than records"))
}

/// Expands the record block into the ascending run of practiced keys.
///
/// Expects [`store_records`] to have run and the `idle` words to follow the
/// record block. Writes replace low bits only, so tags of nodes still to be
/// visited survive until the scan reaches them.
pub fn retrieve_node_scan(
    s: &mut [Word],
    nodes: usize,
    idle: usize,
    iv: Interval,
    cfg: WordConfig,
    stats: &mut OpCounters,
) -> Result<usize, SortError> {
    let total = nodes + idle;
    if total > s.len() {
        return Err(SortError::Corrupt("run longer than segment"));
    }
    let mut scan = s.len();
    let mut write = total;
    for k in (0..nodes).rev() {
        let occurrences = cfg.decode_record(s[k]) as usize + 1;
        let p = next_node(s, &mut scan, cfg)?;
        let key = iv.linear_unhash(p);
        if write < k + occurrences {
            return Err(SortError::Corrupt("retrieval overtook the record block"));
        }
        for slot in &mut s[write - occurrences..write] {
            *slot = cfg.with_low_bits(*slot, key);
        }
        write -= occurrences;
        stats.moved(occurrences as u64);
    }
    if write != 0 {
        return Err(SortError::Corrupt("record counts disagree with run length"));
    }
    // Any tag still below `scan` had no record.
    if s[..scan].iter().any(|&x| cfg.is_node(x)) {
        return Err(SortError::Corrupt("more tagged words than records"));
    }
    Ok(total)
}

/// Improved iterative sort (no recursive form exists).
pub fn sort_improved(s: &mut [Word], cfg: WordConfig) -> Result<OpCounters, SortError> {
    sort_improved_with(s, cfg, &mut NoProbe)
}

pub fn sort_improved_with<P: Probe + ?Sized>(
    s: &mut [Word],
    cfg: WordConfig,
    probe: &mut P,
) -> Result<OpCounters, SortError> {
    cfg.check_input(s.iter().copied())?;
    let mut stats = OpCounters::default();
    let Some(&min) = s.iter().min() else {
        return Ok(stats);
    };
    let mut delta = min;
    let mut start = 0;
    while start < s.len() {
        stats.passes += 1;
        let pass = stats.passes;
        let seg = &mut s[start..];
        let iv = Interval::new(delta, seg.len(), 0);
        let sum = practice(seg, iv, cfg, &mut stats);
        if probe.enabled() {
            probe.phase_done(pass, Phase::Practice, s);
        }
        let seg = &mut s[start..];
        store_records(seg, sum.nodes, cfg, &mut stats)?;
        if probe.enabled() {
            probe.phase_done(pass, Phase::Store, s);
        }
        let seg = &mut s[start..];
        if partition_values(seg, sum.nodes, iv.last_key(), cfg, &mut stats) != sum.idle {
            return Err(SortError::Corrupt("idle count changed during storage"));
        }
        if probe.enabled() {
            probe.phase_done(pass, Phase::Partition, s);
        }
        let seg = &mut s[start..];
        start += retrieve_node_scan(seg, sum.nodes, sum.idle, iv, cfg, &mut stats)?;
        if probe.enabled() {
            probe.phase_done(pass, Phase::Retrieve, s);
        }
        match sum.min_unpracticed {
            Some(d) => delta = d,
            None => break,
        }
    }
    Ok(stats)
}

/// Largest key covered by the super hash over `n` nodes.
fn super_pivot(delta: Word, n: usize, cfg: WordConfig) -> Word {
    let span = (cfg.record_bits() as Word).saturating_mul(n as Word);
    delta.saturating_add(span).saturating_sub(1)
}

/// Practices distinct keys into node bitmaps.
///
/// A second key landing on an already-set bit is a duplicate and is
/// reported; duplicates falling in different passes are not seen here.
pub fn practice_super(
    s: &mut [Word],
    delta: Word,
    cfg: WordConfig,
    stats: &mut OpCounters,
) -> Result<PracticeSummary, SortError> {
    let n = s.len();
    let mut sum = PracticeSummary::default();
    let mut i = 0;
    while i < n {
        let x = s[i];
        if cfg.is_node(x) {
            i += 1;
            continue;
        }
        let Some((j, bit)) = super_hash(x, delta, n, cfg) else {
            sum.min_unpracticed = Some(sum.min_unpracticed.map_or(x, |m| m.min(x)));
            i += 1;
            continue;
        };
        let mask = 1 << bit;
        let target = s[j];
        if cfg.is_node(target) {
            if target & mask != 0 {
                return Err(SortError::DuplicateKey { key: x });
            }
            s[j] = target | mask;
            sum.idle += 1;
            i += 1;
        } else {
            s[i] = target;
            s[j] = cfg.node(mask);
            stats.moved(1);
            stats.node_creations += 1;
            sum.nodes += 1;
            if j < i {
                i += 1;
            }
        }
    }
    sum.unpracticed = n - sum.nodes - sum.idle;
    Ok(sum)
}

/// Super-hash counterpart of [`retrieve_node_scan`]: each node emits one key
/// per set bit, highest bit first, so the right-to-left writes ascend.
pub fn retrieve_super(
    s: &mut [Word],
    nodes: usize,
    idle: usize,
    delta: Word,
    cfg: WordConfig,
    stats: &mut OpCounters,
) -> Result<usize, SortError> {
    let total = nodes + idle;
    let bits: usize = s[..nodes]
        .iter()
        .map(|&x| cfg.decode_record(x).count_ones() as usize)
        .sum();
    if bits != total {
        return Err(SortError::Corrupt("bitmap population disagrees with key count"));
    }
    let width = cfg.record_bits() as Word;
    let mut scan = s.len();
    let mut write = total;
    for k in (0..nodes).rev() {
        let mut map = cfg.decode_record(s[k]);
        let p = next_node(s, &mut scan, cfg)?;
        let base = delta + p as Word * width;
        if write < k + map.count_ones() as usize {
            return Err(SortError::Corrupt("retrieval overtook the record block"));
        }
        while map != 0 {
            let bit = Word::BITS - 1 - map.leading_zeros();
            map &= !(1 << bit);
            write -= 1;
            s[write] = cfg.with_low_bits(s[write], base + bit as Word);
            stats.moved(1);
        }
    }
    if s[..scan].iter().any(|&x| cfg.is_node(x)) {
        return Err(SortError::Corrupt("more tagged words than records"));
    }
    Ok(total)
}

/// Improved sort for distinct keys using the super hash.
pub fn sort_distinct_improved(s: &mut [Word], cfg: WordConfig) -> Result<OpCounters, SortError> {
    sort_distinct_improved_with(s, cfg, &mut NoProbe)
}

pub fn sort_distinct_improved_with<P: Probe + ?Sized>(
    s: &mut [Word],
    cfg: WordConfig,
    probe: &mut P,
) -> Result<OpCounters, SortError> {
    cfg.check_input(s.iter().copied())?;
    let mut stats = OpCounters::default();
    let Some(&min) = s.iter().min() else {
        return Ok(stats);
    };
    let mut delta = min;
    let mut start = 0;
    while start < s.len() {
        stats.passes += 1;
        let pass = stats.passes;
        let seg = &mut s[start..];
        let n = seg.len();
        let sum = practice_super(seg, delta, cfg, &mut stats)?;
        if probe.enabled() {
            probe.phase_done(pass, Phase::Practice, s);
        }
        let seg = &mut s[start..];
        store_records(seg, sum.nodes, cfg, &mut stats)?;
        if probe.enabled() {
            probe.phase_done(pass, Phase::Store, s);
        }
        let seg = &mut s[start..];
        let pivot = super_pivot(delta, n, cfg);
        if partition_values(seg, sum.nodes, pivot, cfg, &mut stats) != sum.idle {
            return Err(SortError::Corrupt("idle count changed during storage"));
        }
        if probe.enabled() {
            probe.phase_done(pass, Phase::Partition, s);
        }
        let seg = &mut s[start..];
        start += retrieve_super(seg, sum.nodes, sum.idle, delta, cfg, &mut stats)?;
        if probe.enabled() {
            probe.phase_done(pass, Phase::Retrieve, s);
        }
        match sum.min_unpracticed {
            Some(d) => delta = d,
            None => break,
        }
    }
    Ok(stats)
}
