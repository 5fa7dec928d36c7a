//! Conventional sorts used as timing baselines.

use std::fmt;
use std::str::FromStr;

use assoc_sort::Word;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Baseline {
    /// `slice::sort_unstable`.
    StdSort,
    /// Distribution counting with an `m`-word histogram.
    Counting,
    /// Least-significant-digit radix sort, 8-bit digits.
    LsdRadix,
}

impl Baseline {
    pub const ALL: [Baseline; 3] = [Baseline::StdSort, Baseline::Counting, Baseline::LsdRadix];

    pub fn as_str(&self) -> &'static str {
        match self {
            Baseline::StdSort => "std_sort",
            Baseline::Counting => "counting",
            Baseline::LsdRadix => "lsd_radix",
        }
    }
}

impl fmt::Display for Baseline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Baseline {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Baseline::ALL.into_iter().find(|b| b.as_str() == s).ok_or(())
    }
}

/// Largest histogram the counting baseline will allocate, in words.
pub const COUNTING_CAP: Word = 1 << 28;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("counting sort range {m} exceeds the cap of {cap} buckets")]
pub struct RangeTooLarge {
    pub m: Word,
    pub cap: Word,
}

/// Sorts words drawn from `[0, m)` by counting occurrences.
pub fn counting_sort_baseline(s: &mut [Word], m: Word, cap: Word) -> Result<(), RangeTooLarge> {
    if m > cap {
        return Err(RangeTooLarge { m, cap });
    }
    let mut hist = vec![0usize; m as usize];
    for &x in s.iter() {
        hist[x as usize] += 1;
    }
    let mut out = s.iter_mut();
    for (v, &c) in hist.iter().enumerate() {
        for slot in out.by_ref().take(c) {
            *slot = v as Word;
        }
    }
    Ok(())
}

/// LSD radix sort over the bytes needed by the largest word.
pub fn lsd_radix_baseline(s: &mut [Word]) {
    let max = s.iter().copied().max().unwrap_or(0);
    let digits = (Word::BITS - max.leading_zeros()).div_ceil(8);
    let mut buf = vec![0; s.len()];
    let mut src: &mut [Word] = s;
    let mut dst: &mut [Word] = &mut buf;
    for d in 0..digits {
        let shift = 8 * d;
        let mut count = [0usize; 256];
        for &x in src.iter() {
            count[((x >> shift) & 0xff) as usize] += 1;
        }
        let mut sum = 0;
        for c in count.iter_mut() {
            let here = *c;
            *c = sum;
            sum += here;
        }
        for &x in src.iter() {
            let b = ((x >> shift) & 0xff) as usize;
            dst[count[b]] = x;
            count[b] += 1;
        }
        std::mem::swap(&mut src, &mut dst);
    }
    if digits % 2 == 1 {
        // The result sits in the scratch buffer.
        dst.copy_from_slice(src);
    }
}

pub fn run_baseline(b: Baseline, s: &mut [Word], m: Word) -> Result<(), RangeTooLarge> {
    match b {
        Baseline::StdSort => s.sort_unstable(),
        Baseline::Counting => counting_sort_baseline(s, m, COUNTING_CAP)?,
        Baseline::LsdRadix => lsd_radix_baseline(s),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::reference_sort;

    #[test]
    fn examples() {
        for b in Baseline::ALL {
            let mut s = [2, 0, 2, 1];
            run_baseline(b, &mut s, 3).unwrap();
            assert_eq!(s, [0, 1, 2, 2], "{b}");
            let mut eq = [5; 6];
            run_baseline(b, &mut eq, 6).unwrap();
            assert_eq!(eq, [5; 6]);
        }
    }

    #[test]
    fn counting_cap() {
        let mut s = [1];
        assert_eq!(counting_sort_baseline(&mut s, 100, 10), Err(RangeTooLarge { m: 100, cap: 10 }));
    }

    #[test]
    fn random_matches_reference() {
        let mut x = 0x1234_5678_u64;
        for bits in [8u32, 16, 24, 40, 64] {
            let s: Vec<Word> = (0..3000)
                .map(|_| {
                    x ^= x << 13;
                    x ^= x >> 7;
                    x ^= x << 17;
                    if bits == 64 { x } else { x & ((1 << bits) - 1) }
                })
                .collect();
            let mut r = s.clone();
            lsd_radix_baseline(&mut r);
            assert_eq!(r, reference_sort(&s), "bits={bits}");
            if bits <= 16 {
                let mut c = s.clone();
                counting_sort_baseline(&mut c, 1 << bits, COUNTING_CAP).unwrap();
                assert_eq!(c, reference_sort(&s));
            }
        }
    }
}
