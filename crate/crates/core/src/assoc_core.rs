//! The original three-phase associative sort: practicing, storage and
//! retrieval, driven either iteratively or recursively.
//!
//! A pass over a segment of `n` untagged words with minimum `delta` works
//! like this:
//!
//! 1. **Practicing.** Keys of `[delta, delta + n - eps)` are hashed to
//!    indices `[eps, n)`. The first occurrence of a key swaps itself to its
//!    slot and becomes a node with an empty record; later occurrences only
//!    increment that record and stay behind as *idle* words.
//! 2. **Storage.** Nodes are compacted to the front in order. A node whose
//!    count fits beside its position packs `position << c | count` in its
//!    record (`c = w - 1 - ceil(log2 n)`); otherwise the next slot is filled
//!    with an idle word overwritten by the node's position (a *companion*).
//!    The `eps` slots reserved at the front of the hash space guarantee the
//!    compaction never runs into an unprocessed node.
//! 3. **Retrieval.** The idle words are partitioned to sit right after the
//!    short-term memory; the memory is then read right to left and every key
//!    is written `count + 1` times, also right to left, which never
//!    overtakes the read cursor.
//!
//! The iterative driver repeats this on the unpracticed tail. The recursive
//! driver descends into the tail without partitioning (idle residue is just
//! more input for the next level) and retrieves on the way back up.

use crate::element::KeySlot;
use crate::error::SortError;
use crate::stats::{NoProbe, OpCounters, Phase, Probe};
use crate::word_model::{ils_offset, Interval, Word, WordConfig};

/// Counts produced by a practicing pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PracticeSummary {
    /// Nodes created.
    pub nodes: usize,
    /// Idle words counted into some node.
    pub idle: usize,
    /// Words outside the practiced interval.
    pub unpracticed: usize,
    /// Smallest unpracticed key, if any.
    pub min_unpracticed: Option<Word>,
}

impl PracticeSummary {
    /// Words that end up sorted by this pass.
    pub fn practiced(&self) -> usize {
        self.nodes + self.idle
    }
}

/// Shape of the short-term memory left by [`store_nodes`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StorageLayout {
    pub nodes: usize,
    pub companions: usize,
    pub idle: usize,
    /// Width of the count field in a packed record; the position sits above.
    pub count_bits: u32,
}

impl StorageLayout {
    /// Words occupied by the short-term memory.
    pub fn memory_len(&self) -> usize {
        self.nodes + self.companions
    }
}

/// Practices every key of `iv` over `s`.
///
/// Shared by the value sorters (on words) and by the permutation sort (on
/// elements); slots move whole, only the key word of a new node is rewritten.
pub fn practice<T: KeySlot>(
    s: &mut [T],
    iv: Interval,
    cfg: WordConfig,
    stats: &mut OpCounters,
) -> PracticeSummary {
    let n = s.len();
    let mut sum = PracticeSummary::default();
    let mut i = 0;
    while i < n {
        let x = s[i].key();
        if cfg.is_node(x) {
            i += 1;
            continue;
        }
        let Some(j) = iv.linear_hash(x) else {
            sum.min_unpracticed = Some(sum.min_unpracticed.map_or(x, |m| m.min(x)));
            i += 1;
            continue;
        };
        let target = s[j].key();
        if cfg.is_node(target) {
            s[j].set_key(target + 1);
            sum.idle += 1;
            i += 1;
        } else {
            s.swap(i, j);
            s[j].set_key(cfg.node(0));
            stats.moved(1);
            stats.node_creations += 1;
            sum.nodes += 1;
            // A word arriving from the left was already classified.
            if j < i {
                i += 1;
            }
        }
    }
    sum.unpracticed = n - sum.nodes - sum.idle;
    sum
}

/// Compacts the nodes of a practiced segment into its front.
pub fn store_nodes(
    s: &mut [Word],
    summary: &PracticeSummary,
    iv: Interval,
    cfg: WordConfig,
    stats: &mut OpCounters,
) -> Result<StorageLayout, SortError> {
    let n = s.len();
    let count_bits = cfg.record_bits() - cfg.pos_bits(n);
    let threshold: u128 = 1 << count_bits;
    let is_idle = |x: Word| !cfg.is_node(x) && iv.contains(x);

    let mut write = 0;
    let mut companions = 0;
    let mut cursor = 0;
    let mut seen = 0;
    for p in 0..n {
        if seen == summary.nodes {
            break;
        }
        let x = s[p];
        if !cfg.is_node(x) {
            continue;
        }
        seen += 1;
        let count = cfg.decode_record(x);
        if write != p {
            debug_assert!(!cfg.is_node(s[write]));
            s.swap(write, p);
            stats.moved(1);
        }
        if (count as u128) < threshold {
            s[write] = cfg.node(((p as Word) << count_bits) | count);
            write += 1;
            continue;
        }
        let slot = write + 1;
        if slot >= n || cfg.is_node(s[slot]) {
            return Err(SortError::CompanionUnavailable { index: p });
        }
        if !is_idle(s[slot]) {
            let found = (cursor.max(slot + 1)..n)
                .find(|&q| is_idle(s[q]))
                .or_else(|| (slot + 1..n).find(|&q| is_idle(s[q])))
                .ok_or(SortError::CompanionUnavailable { index: p })?;
            s.swap(slot, found);
            stats.moved(1);
            cursor = found + 1;
        }
        s[slot] = p as Word;
        stats.moved(1);
        companions += 1;
        write += 2;
    }
    if seen != summary.nodes {
        return Err(SortError::Corrupt("fewer nodes than practiced"));
    }
    Ok(StorageLayout {
        nodes: summary.nodes,
        companions,
        idle: summary.idle,
        count_bits,
    })
}

/// Moves the words `<= pivot` of `s[start..]` to the front of that region.
///
/// Returns how many there were. Unstable.
pub fn partition_tail(s: &mut [Word], start: usize, pivot: Word, stats: &mut OpCounters) -> usize {
    let tail = &mut s[start..];
    let mut lo = 0;
    let mut hi = tail.len();
    while lo < hi {
        if tail[lo] <= pivot {
            lo += 1;
        } else {
            hi -= 1;
            tail.swap(lo, hi);
            stats.moved(1);
        }
    }
    lo
}

/// Expands the short-term memory into the sorted run of all practiced keys.
///
/// The idle words not used as companions must already follow the memory.
/// Returns the length of the run.
pub fn retrieve_sequential(
    s: &mut [Word],
    layout: &StorageLayout,
    iv: Interval,
    cfg: WordConfig,
    stats: &mut OpCounters,
) -> Result<usize, SortError> {
    let total = layout.nodes + layout.idle;
    if total > s.len() || layout.memory_len() > total {
        return Err(SortError::Corrupt("short-term memory larger than its run"));
    }
    let count_mask: Word = (1 << layout.count_bits) - 1;
    let mut read = layout.memory_len();
    let mut write = total;
    while read > 0 {
        read -= 1;
        let x = s[read];
        let (pos, count) = if cfg.is_node(x) {
            let rec = cfg.decode_record(x);
            (rec >> layout.count_bits, rec & count_mask)
        } else {
            if read == 0 || !cfg.is_node(s[read - 1]) {
                return Err(SortError::Corrupt("companion without a node"));
            }
            read -= 1;
            (x, cfg.decode_record(s[read]))
        };
        let pos = pos as usize;
        if pos < iv.base || pos - iv.base >= iv.span {
            return Err(SortError::Corrupt("stored position outside the interval"));
        }
        let key = iv.linear_unhash(pos);
        let occurrences = count as usize + 1;
        if write < read + occurrences {
            return Err(SortError::Corrupt("retrieval overtook the short-term memory"));
        }
        for slot in &mut s[write - occurrences..write] {
            *slot = key;
        }
        write -= occurrences;
        stats.moved(occurrences as u64);
    }
    if write != 0 {
        return Err(SortError::Corrupt("record counts disagree with run length"));
    }
    Ok(total)
}

fn practice_interval(seg: &[Word], delta: Word, cfg: WordConfig) -> Result<Interval, SortError> {
    let offset = ils_offset(seg.len(), cfg)?;
    Ok(Interval::new(delta, seg.len() - offset, offset))
}

/// Practices and stores one segment; returns the interval used, the layout
/// and the practicing summary.
fn practice_and_store(
    seg: &mut [Word],
    delta: Word,
    cfg: WordConfig,
    stats: &mut OpCounters,
) -> Result<(Interval, StorageLayout, PracticeSummary), SortError> {
    let iv = practice_interval(seg, delta, cfg)?;
    let summary = practice(seg, iv, cfg, stats);
    let layout = store_nodes(seg, &summary, iv, cfg, stats)?;
    Ok((iv, layout, summary))
}

/// Iterative driver.
pub fn sort_associative(s: &mut [Word], cfg: WordConfig) -> Result<OpCounters, SortError> {
    sort_associative_with(s, cfg, &mut NoProbe)
}

pub fn sort_associative_with<P: Probe + ?Sized>(
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
        let iv = practice_interval(seg, delta, cfg)?;
        let summary = practice(seg, iv, cfg, &mut stats);
        if probe.enabled() {
            probe.phase_done(pass, Phase::Practice, s);
        }
        let seg = &mut s[start..];
        let layout = store_nodes(seg, &summary, iv, cfg, &mut stats)?;
        if probe.enabled() {
            probe.phase_done(pass, Phase::Store, s);
        }
        let seg = &mut s[start..];
        let moved = partition_tail(seg, layout.memory_len(), iv.last_key(), &mut stats);
        if moved != layout.idle - layout.companions {
            return Err(SortError::Corrupt("idle count changed during storage"));
        }
        if probe.enabled() {
            probe.phase_done(pass, Phase::Partition, s);
        }
        let seg = &mut s[start..];
        let written = retrieve_sequential(seg, &layout, iv, cfg, &mut stats)?;
        if probe.enabled() {
            probe.phase_done(pass, Phase::Retrieve, s);
        }
        start += written;
        match summary.min_unpracticed {
            Some(d) => delta = d,
            None => break,
        }
    }
    Ok(stats)
}

/// Per-level state kept by the recursive driver.
///
/// The companion count is recounted from the memory itself (its untagged
/// words), so three words per level suffice.
#[derive(Debug, Clone, Copy)]
struct Level {
    delta: Word,
    memory: usize,
    extent: usize,
}

/// Auxiliary words the recursive driver keeps per level.
pub const WORDS_PER_LEVEL: usize = std::mem::size_of::<Level>() / std::mem::size_of::<Word>();

/// Recursive driver.
///
/// Levels live on an explicit stack that grows by half its size, so control
/// storage stays below `8 * depth` words even while it is being reallocated.
pub fn sort_associative_recursive(s: &mut [Word], cfg: WordConfig) -> Result<OpCounters, SortError> {
    sort_associative_recursive_with(s, cfg, &mut NoProbe)
}

pub fn sort_associative_recursive_with<P: Probe + ?Sized>(
    s: &mut [Word],
    cfg: WordConfig,
    probe: &mut P,
) -> Result<OpCounters, SortError> {
    cfg.check_input(s.iter().copied())?;
    let mut stats = OpCounters::default();
    let mut levels: Vec<Level> = Vec::new();
    let mut start = 0;

    // Descend: practice, store and partition each level, recurse on the
    // unpracticed tail.
    while start < s.len() {
        let seg = &mut s[start..];
        let delta = *seg.iter().min().expect("non-empty segment");
        stats.passes += 1;
        let (iv, layout, _) = practice_and_store(seg, delta, cfg, &mut stats)?;
        if probe.enabled() {
            probe.phase_done(stats.passes, Phase::Store, s);
        }
        let seg = &mut s[start..];
        let residue = partition_tail(seg, layout.memory_len(), iv.last_key(), &mut stats);
        if residue != layout.idle - layout.companions {
            return Err(SortError::Corrupt("idle count changed during storage"));
        }
        if probe.enabled() {
            probe.phase_done(stats.passes, Phase::Partition, s);
        }
        if levels.len() == levels.capacity() {
            levels.reserve_exact((levels.capacity() / 2).max(1));
        }
        let extent = layout.memory_len() + residue;
        levels.push(Level { delta, memory: layout.memory_len(), extent });
        start += extent;
    }

    // Unwind: each level's idle residue sits between its memory and the
    // already sorted tail.
    let mut depth = levels.len() as u64;
    while let Some(level) = levels.pop() {
        start -= level.extent;
        let seg = &mut s[start..];
        let iv = practice_interval(seg, level.delta, cfg)?;
        let companions = seg[..level.memory].iter().filter(|&&x| !cfg.is_node(x)).count();
        let nodes = level.memory - companions;
        let layout = StorageLayout {
            nodes,
            companions,
            idle: level.extent - nodes,
            count_bits: cfg.record_bits() - cfg.pos_bits(seg.len()),
        };
        retrieve_sequential(seg, &layout, iv, cfg, &mut stats)?;
        if probe.enabled() {
            probe.phase_done(depth, Phase::Retrieve, s);
        }
        depth -= 1;
    }
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(w: u32) -> WordConfig {
        WordConfig::new(w).unwrap()
    }

    #[test]
    fn practice_example_with_duplicates() {
        let c = cfg(8);
        let mut s = [2, 0, 2, 1];
        let mut st = OpCounters::default();
        let sum = practice(&mut s, Interval::new(0, 4, 0), c, &mut st);
        assert_eq!((sum.nodes, sum.idle, sum.unpracticed), (3, 1, 0));
        assert_eq!(&s[..3], &[c.node(0), c.node(0), c.node(1)]);
        assert!(!c.is_node(s[3]));
    }

    #[test]
    fn practice_singleton_and_all_equal() {
        let c = cfg(8);
        let mut st = OpCounters::default();
        let mut one = [5];
        let sum = practice(&mut one, Interval::new(5, 1, 0), c, &mut st);
        assert_eq!(one, [c.node(0)]);
        assert_eq!(sum.nodes, 1);

        let mut eq = [0, 0, 0, 0];
        let sum = practice(&mut eq, Interval::new(0, 4, 0), c, &mut st);
        assert_eq!(eq[0], c.node(3));
        assert_eq!(sum.idle, 3);
    }

    #[test]
    fn packed_record_without_companion() {
        // w = 8, n = 16: 4 position bits, 3 count bits.
        let c = cfg(8);
        let mut s = [50u64; 16];
        s[9] = c.node(1);
        s[3] = 3; // idle partner
        let iv = Interval::new(0, 15, 1);
        let sum = PracticeSummary { nodes: 1, idle: 1, unpracticed: 14, min_unpracticed: Some(50) };
        let mut st = OpCounters::default();
        let layout = store_nodes(&mut s, &sum, iv, c, &mut st).unwrap();
        assert_eq!(layout.companions, 0);
        assert_eq!(s[0], c.node((9 << 3) | 1));
        assert_eq!(c.decode_record(s[0]), 73);
    }

    #[test]
    fn companion_carries_position() {
        // Count 8 = 2^(8-1-4) does not fit in 3 bits.
        let c = cfg(8);
        let mut s = [100u64; 16];
        s[9] = c.node(8);
        for q in [2, 4, 6, 10, 11, 12, 13, 14] {
            s[q] = 8; // idle copies of key 8 (delta 0, offset 1)
        }
        let iv = Interval::new(0, 15, 1);
        let sum = PracticeSummary { nodes: 1, idle: 8, unpracticed: 7, min_unpracticed: Some(100) };
        let mut st = OpCounters::default();
        let layout = store_nodes(&mut s, &sum, iv, c, &mut st).unwrap();
        assert_eq!(layout.companions, 1);
        assert_eq!(s[0], c.node(8));
        assert_eq!(s[1], 9);
        let moved = partition_tail(&mut s, 2, iv.last_key(), &mut st);
        assert_eq!(moved, 7);
        assert_eq!(retrieve_sequential(&mut s, &layout, iv, c, &mut st).unwrap(), 9);
        assert_eq!(&s[..9], &[8; 9]);
    }

    #[test]
    fn store_empty_segment() {
        let c = cfg(8);
        let mut s: [Word; 0] = [];
        let mut st = OpCounters::default();
        let layout = store_nodes(&mut s, &PracticeSummary::default(), Interval::new(0, 1, 0), c, &mut st)
            .unwrap();
        assert_eq!((layout.nodes, layout.companions), (0, 0));
    }

    #[test]
    fn partition_examples() {
        let mut st = OpCounters::default();
        let mut s = [9, 3, 8];
        assert_eq!(partition_tail(&mut s, 0, 3, &mut st), 1);
        assert_eq!(s[0], 3);
        let mut all = [1, 2, 3];
        assert_eq!(partition_tail(&mut all, 0, 3, &mut st), 3);
    }

    #[test]
    fn full_pipeline_small() {
        let c = cfg(8);
        let mut s = [2, 0, 2, 1];
        sort_associative(&mut s, c).unwrap();
        assert_eq!(s, [0, 1, 2, 2]);
        let mut r = [2, 0, 2, 1];
        sort_associative_recursive(&mut r, c).unwrap();
        assert_eq!(r, [0, 1, 2, 2]);
    }

    #[test]
    fn trivial_inputs() {
        let c = cfg(16);
        let mut e: [Word; 0] = [];
        assert_eq!(sort_associative(&mut e, c).unwrap().passes, 0);
        assert_eq!(sort_associative_recursive(&mut e, c).unwrap().passes, 0);
        let mut one = [42];
        assert_eq!(sort_associative(&mut one, c).unwrap().passes, 1);
        assert_eq!(one, [42]);
    }

    #[test]
    fn all_equal_recursion_depth_one() {
        let c = cfg(16);
        let mut s = [7u64; 100];
        let st = sort_associative_recursive(&mut s, c).unwrap();
        assert_eq!(st.passes, 1);
        assert_eq!(s, [7u64; 100]);
    }

    #[test]
    fn decreasing_run_single_level() {
        let c = cfg(32);
        let mut s: Vec<Word> = (0..200).rev().collect();
        let st = sort_associative_recursive(&mut s, c).unwrap();
        assert_eq!(st.passes, 1);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn rejects_tagged_input() {
        let c = cfg(8);
        let mut s = [1, 200];
        assert!(matches!(
            sort_associative(&mut s, c),
            Err(SortError::WordOutOfUniverse { index: 1, .. })
        ));
    }

    #[test]
    fn dense_heavy_nodes_store_without_collision() {
        // w = 8, n = 64: threshold 2, so 21 values with 3 copies each all
        // need companions. The reserved origin must cover that.
        let c = cfg(8);
        let mut s: Vec<Word> = (0..21).flat_map(|k| [k, k, k]).collect();
        s.push(21);
        sort_associative(&mut s, c).unwrap();
        let mut want: Vec<Word> = (0..21).flat_map(|k| [k, k, k]).collect();
        want.push(21);
        assert_eq!(s, want);
    }
}
