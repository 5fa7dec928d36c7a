//! Reference results for verification.

use assoc_sort::{Element, Word};

/// Ascending copy via the standard library's comparison sort.
pub fn reference_sort(s: &[Word]) -> Vec<Word> {
    let mut out = s.to_vec();
    out.sort();
    out
}

/// A key-ascending arrangement of `e` and its key sequence.
pub fn reference_rank_sort<P: Clone>(e: &[Element<P>]) -> (Vec<Element<P>>, Vec<Word>) {
    let mut out = e.to_vec();
    out.sort_by_key(|x| x.key);
    let keys = out.iter().map(|x| x.key).collect();
    (out, keys)
}

/// First index where `sorted` differs from the reference order of `original`.
pub fn first_divergence(sorted: &[Word], original: &[Word]) -> Option<usize> {
    let expect = reference_sort(original);
    if sorted.len() != expect.len() {
        return Some(sorted.len().min(expect.len()));
    }
    sorted.iter().zip(&expect).position(|(a, b)| a != b)
}

/// True iff `sorted` is ascending and holds the multiset of `original`.
pub fn verify(sorted: &[Word], original: &[Word]) -> bool {
    first_divergence(sorted, original).is_none()
}
