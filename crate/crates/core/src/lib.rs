//! In-place associative sorting of integers on tagged words.
//!
//! Every variant treats the array itself as an associative memory: a key
//! hashes to a slot, which is turned into a *node* by setting the top bit of
//! a `w`-bit word, and the remaining bits count or locate the keys that
//! mapped there. No auxiliary array is allocated; drivers keep a constant
//! number of words of state (the recursive driver keeps a few per level).
//!
//! ```
//! use assoc_sort::{sort_words, Algorithm, WordConfig};
//!
//! let cfg = WordConfig::new(16)?;
//! let mut s = vec![907, 3, 41, 3, 600, 0];
//! sort_words(Algorithm::AssocImproved, &mut s, cfg)?;
//! assert_eq!(s, [0, 3, 3, 41, 600, 907]);
//! # Ok::<(), assoc_sort::SortError>(())
//! ```
//!
//! Rank-sorting moves whole elements:
//!
//! ```
//! use assoc_sort::{perm_sort::sort_by_key, Element, WordConfig};
//!
//! let mut s = vec![Element::new(2, "two"), Element::new(0, "zero"), Element::new(1, "one")];
//! sort_by_key(&mut s, WordConfig::machine())?;
//! let names: Vec<_> = s.iter().map(|e| e.payload).collect();
//! assert_eq!(names, ["zero", "one", "two"]);
//! # Ok::<(), assoc_sort::SortError>(())
//! ```

pub mod assoc_core;
pub mod assoc_improved;
pub mod cycle_leader;
pub mod element;
pub mod error;
pub mod perm_sort;
pub mod range_adapter;
pub mod stats;
pub mod word_model;

pub use element::{Element, KeySlot};
pub use error::SortError;
pub use range_adapter::{scan_min_max, sort_full_universe, sort_words, sort_words_with, Algorithm};
pub use stats::{NoProbe, OpCounters, Phase, Probe, Recorder};
pub use word_model::{Interval, Word, WordConfig};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/words.md")]
    mod words {}
    #[doc = include_str!("../../../book/src/practicing.md")]
    mod practicing {}
    #[doc = include_str!("../../../book/src/storage.md")]
    mod storage {}
    #[doc = include_str!("../../../book/src/improved.md")]
    mod improved {}
    #[doc = include_str!("../../../book/src/permutation.md")]
    mod permutation {}
    #[doc = include_str!("../../../book/src/universe.md")]
    mod universe {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
