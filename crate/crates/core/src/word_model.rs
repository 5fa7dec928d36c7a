//! Virtual words, the tag-bit codec and the hash functions shared by every
//! sorting variant.
//!
//! A [`WordConfig`] fixes a virtual word width `w`. Bit `w - 1` is the tag bit
//! that marks a word as a *node*; the remaining `w - 1` bits are its *record*.
//! Input words must be untagged, i.e. `< 2^(w-1)`, before a sort starts.
//!
//! The width is a runtime value rather than the machine width so that the
//! record-overflow and companion paths of the original variant show up on
//! arrays of a few dozen elements.

use crate::error::SortError;

/// Machine word used for keys, nodes and records.
pub type Word = u64;

/// Smallest virtual word width accepted by [`WordConfig::new`].
pub const MIN_WIDTH: u32 = 4;
/// Largest virtual word width accepted by [`WordConfig::new`].
pub const MAX_WIDTH: u32 = Word::BITS;

/// Virtual word width together with its derived masks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WordConfig {
    width: u32,
    tag_mask: Word,
    value_mask: Word,
}

impl WordConfig {
    pub fn new(width: u32) -> Result<Self, SortError> {
        if !(MIN_WIDTH..=MAX_WIDTH).contains(&width) {
            return Err(SortError::InvalidWidth { width });
        }
        let tag_mask = 1 << (width - 1);
        Ok(Self {
            width,
            tag_mask,
            value_mask: tag_mask - 1,
        })
    }

    /// Full 64-bit words.
    pub fn machine() -> Self {
        Self::new(MAX_WIDTH).expect("machine width is valid")
    }

    #[inline]
    pub fn width(&self) -> u32 {
        self.width
    }

    /// Number of record bits, `w - 1`.
    #[inline]
    pub fn record_bits(&self) -> u32 {
        self.width - 1
    }

    /// The word with only bit `w - 1` set.
    #[inline]
    pub fn tag_mask(&self) -> Word {
        self.tag_mask
    }

    /// The word with bits `0 ..= w - 2` set.
    #[inline]
    pub fn value_mask(&self) -> Word {
        self.value_mask
    }

    /// Largest word representable in `w` bits.
    #[inline]
    pub fn word_max(&self) -> Word {
        if self.width == Word::BITS {
            Word::MAX
        } else {
            (1 << self.width) - 1
        }
    }

    /// Largest array length any variant accepts, `2^(w-1)`.
    #[inline]
    pub fn max_len(&self) -> u64 {
        self.tag_mask
    }

    #[inline]
    pub fn is_node(&self, x: Word) -> bool {
        x & self.tag_mask != 0
    }

    /// Tags `record` as a node.
    #[inline]
    pub fn encode_node(&self, record: Word) -> Result<Word, SortError> {
        if record > self.value_mask {
            return Err(SortError::RecordOverflow {
                record,
                width: self.width,
            });
        }
        Ok(self.tag_mask | record)
    }

    /// Unchecked variant of [`encode_node`](Self::encode_node) used on hot
    /// paths where the record is bounded by the array length.
    #[inline]
    pub(crate) fn node(&self, record: Word) -> Word {
        debug_assert!(record <= self.value_mask, "record overflow");
        self.tag_mask | record
    }

    #[inline]
    pub fn decode_record(&self, x: Word) -> Word {
        x & self.value_mask
    }

    /// Replaces the low `w - 1` bits of `x`, keeping its tag bit.
    #[inline]
    pub(crate) fn with_low_bits(&self, x: Word, value: Word) -> Word {
        (x & self.tag_mask) | (value & self.value_mask)
    }

    /// Bits needed to store a position in an array of `n` words,
    /// `ceil(log2 n)`.
    #[inline]
    pub fn pos_bits(&self, n: usize) -> u32 {
        ceil_log2(n)
    }

    /// Checks that `n` words can be sorted under this configuration and that
    /// every word is untagged.
    pub fn check_input(&self, words: impl IntoIterator<Item = Word>) -> Result<(), SortError> {
        let mut len = 0u64;
        for (index, word) in words.into_iter().enumerate() {
            if word > self.value_mask {
                return Err(SortError::WordOutOfUniverse {
                    index,
                    word,
                    width: self.width,
                });
            }
            len += 1;
        }
        self.check_len(len as usize)
    }

    pub fn check_len(&self, n: usize) -> Result<(), SortError> {
        if n as u64 > self.max_len() {
            return Err(SortError::TooLong {
                len: n,
                width: self.width,
            });
        }
        Ok(())
    }
}

impl Default for WordConfig {
    fn default() -> Self {
        Self::machine()
    }
}

/// `ceil(log2 n)`, with `ceil_log2(0) = ceil_log2(1) = 0`.
#[inline]
pub fn ceil_log2(n: usize) -> u32 {
    if n <= 1 {
        0
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}

/// A window of hashable key values laid over a region of the array.
///
/// Keys in `[delta, delta + span)` map to array indices
/// `[base, base + span)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Interval {
    pub delta: Word,
    pub span: usize,
    pub base: usize,
}

impl Interval {
    pub fn new(delta: Word, span: usize, base: usize) -> Self {
        debug_assert!(span >= 1);
        Self { delta, span, base }
    }

    /// Largest key inside the interval; the partition pivot.
    #[inline]
    pub fn last_key(&self) -> Word {
        self.delta
            .saturating_add(self.span as Word)
            .saturating_sub(1)
    }

    #[inline]
    pub fn contains(&self, key: Word) -> bool {
        key >= self.delta && key - self.delta < self.span as Word
    }

    /// Index of `key`, or `None` when the key lies outside the interval.
    #[inline]
    pub fn linear_hash(&self, key: Word) -> Option<usize> {
        if self.contains(key) {
            Some(self.base + (key - self.delta) as usize)
        } else {
            None
        }
    }

    #[inline]
    pub fn linear_unhash(&self, index: usize) -> Word {
        debug_assert!(index >= self.base && index - self.base < self.span);
        self.delta + (index - self.base) as Word
    }
}

/// Node index and bit index of `key` under the super hash over `nodes`
/// nodes of `w - 1` bits each, or `None` if `key - delta >= (w - 1) * nodes`.
#[inline]
pub fn super_hash(key: Word, delta: Word, nodes: usize, cfg: WordConfig) -> Option<(usize, u32)> {
    let bits = cfg.record_bits() as Word;
    let offset = key.checked_sub(delta)?;
    if offset >= bits.saturating_mul(nodes as Word) {
        return None;
    }
    Some(((offset / bits) as usize, (offset % bits) as u32))
}

#[inline]
pub fn super_unhash(node: usize, bit: u32, delta: Word, cfg: WordConfig) -> Word {
    debug_assert!(bit < cfg.record_bits());
    delta + node as Word * cfg.record_bits() as Word + bit as Word
}

/// Number of leading array slots reserved so that nodes whose count does not
/// fit beside their position can each borrow an idle word during storage.
///
/// Returns 0 whenever `2 * ceil(log2 n) < w`; otherwise
/// `ceil((n / 2) / 2^(w - 1 - ceil(log2 n)))`.
pub fn epsilon(n: usize, cfg: WordConfig) -> Result<usize, SortError> {
    cfg.check_len(n)?;
    let pos_bits = ceil_log2(n);
    if 2 * pos_bits < cfg.width() {
        return Ok(0);
    }
    // (n / 2) / 2^(w-1-p) == n / 2^(w-p)
    let shift = cfg.width() - pos_bits;
    let denom = 1u128 << shift;
    Ok((n as u128).div_ceil(denom) as usize)
}

/// Smallest count that no longer fits in a packed record beside a position
/// of `ceil(log2 n)` bits, `2^(w - 1 - ceil(log2 n))`.
pub fn companion_threshold(n: usize, cfg: WordConfig) -> u128 {
    1u128 << (cfg.record_bits() - ceil_log2(n))
}

/// Largest number of distinct values that can occur more than
/// [`companion_threshold`] times among `n` words: `floor(n / (T + 1))`.
///
/// This is the exact worst-case companion demand of a storage pass.
pub fn max_companion_demand(n: usize, cfg: WordConfig) -> usize {
    (n as u128 / (companion_threshold(n, cfg) + 1)) as usize
}

/// ILS origin used by the original variant: the larger of [`epsilon`] and
/// [`max_companion_demand`], so storage can never run out of companions.
pub fn ils_offset(n: usize, cfg: WordConfig) -> Result<usize, SortError> {
    Ok(epsilon(n, cfg)?.max(max_companion_demand(n, cfg)))
}
