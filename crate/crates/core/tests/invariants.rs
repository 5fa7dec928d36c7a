mod common;

use std::collections::BTreeMap;

use assoc_sort::assoc_core::{practice, store_nodes};
use assoc_sort::assoc_improved::{practice_super, store_records};
use assoc_sort::perm_sort::{
    accumulate_records, practice_rank, reactivate, repractice_idle, restore_keys, sort_by_key,
    sort_by_key_with,
};
use assoc_sort::word_model::ils_offset;
use assoc_sort::{
    sort_words, sort_words_with, Algorithm, Element, Interval, OpCounters, Phase, Recorder, Word,
    WordConfig,
};
use common::*;
use proptest::prelude::*;

fn segment() -> impl Strategy<Value = (u32, Vec<Word>)> {
    (6u32..=20).prop_flat_map(|w| {
        let cap = 1u64 << (w - 1);
        let max_n = cap.min(150) as usize;
        (Just(w), 1..=cap.min(400), 1..=max_n)
            .prop_flat_map(|(w, m, n)| (Just(w), prop::collection::vec(0..m, n)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn practice_conserves_counts((w, input) in segment()) {
        let cfg = WordConfig::new(w).unwrap();
        let mut s = input.clone();
        let delta = *s.iter().min().unwrap();
        let n = s.len();
        let offset = ils_offset(n, cfg).unwrap();
        let iv = Interval::new(delta, n - offset, offset);
        let sum = practice(&mut s, iv, cfg, &mut OpCounters::default());
        let tagged: Vec<usize> = (0..n).filter(|&i| cfg.is_node(s[i])).collect();
        prop_assert_eq!(tagged.len(), sum.nodes);
        let counted: u64 = tagged.iter().map(|&i| cfg.decode_record(s[i]) + 1).sum();
        prop_assert_eq!(counted as usize + sum.unpracticed, n);
        prop_assert!(sum.nodes >= 1);
        // Each node sits on the hash slot of a key it counts.
        for &i in &tagged {
            let key = iv.linear_unhash(i);
            let expect = input.iter().filter(|&&x| x == key).count() as u64;
            prop_assert_eq!(cfg.decode_record(s[i]) + 1, expect);
        }
        let outside: Vec<Word> = input.iter().copied().filter(|&x| !iv.contains(x)).collect();
        prop_assert_eq!(sum.unpracticed, outside.len());
        prop_assert_eq!(sum.min_unpracticed, outside.iter().copied().min());
    }

    #[test]
    fn storage_keeps_node_order((w, input) in segment()) {
        let cfg = WordConfig::new(w).unwrap();
        let mut s = input;
        let delta = *s.iter().min().unwrap();
        let n = s.len();
        let offset = ils_offset(n, cfg).unwrap();
        let iv = Interval::new(delta, n - offset, offset);
        let mut st = OpCounters::default();
        let sum = practice(&mut s, iv, cfg, &mut st);
        let layout = store_nodes(&mut s, &sum, iv, cfg, &mut st).unwrap();
        let mut positions = Vec::new();
        let mut i = 0;
        while i < layout.memory_len() {
            prop_assert!(cfg.is_node(s[i]));
            let rec = cfg.decode_record(s[i]);
            if i + 1 < layout.memory_len() && !cfg.is_node(s[i + 1]) {
                positions.push(s[i + 1]);
                i += 2;
            } else {
                positions.push(rec >> layout.count_bits);
                i += 1;
            }
        }
        prop_assert_eq!(positions.len(), sum.nodes);
        prop_assert!(positions.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn record_block_follows_tags((w, input) in segment()) {
        let cfg = WordConfig::new(w).unwrap();
        let mut s = input;
        let delta = *s.iter().min().unwrap();
        let iv = Interval::new(delta, s.len(), 0);
        let mut st = OpCounters::default();
        practice(&mut s, iv, cfg, &mut st);
        let before: Vec<(usize, Word)> = (0..s.len())
            .filter(|&i| cfg.is_node(s[i]))
            .map(|i| (i, cfg.decode_record(s[i])))
            .collect();
        store_records(&mut s, before.len(), cfg, &mut st).unwrap();
        let after: Vec<usize> = (0..s.len()).filter(|&i| cfg.is_node(s[i])).collect();
        let tags: Vec<usize> = before.iter().map(|b| b.0).collect();
        prop_assert_eq!(after, tags);
        for (k, &(_, rec)) in before.iter().enumerate() {
            prop_assert_eq!(s[k] & cfg.value_mask(), rec);
        }
    }

    #[test]
    fn bitmap_population_counts_keys(w in 5u32..=24, raw in prop::collection::btree_set(0u64..2000, 1..120)) {
        let cfg = WordConfig::new(w).unwrap();
        let mut s: Vec<Word> = raw.iter().copied().filter(|&x| x < 1 << (w - 1)).collect();
        prop_assume!(!s.is_empty() && s.len() <= 1 << (w - 1));
        s.reverse();
        let delta = *s.iter().min().unwrap();
        let sum = practice_super(&mut s, delta, cfg, &mut OpCounters::default()).unwrap();
        let pop: u32 = s.iter().filter(|&&x| cfg.is_node(x)).map(|&x| cfg.decode_record(x).count_ones()).sum();
        prop_assert_eq!(pop as usize, sum.practiced());
    }

    #[test]
    fn rank_sort_carries_payloads((w, keys) in segment()) {
        let cfg = WordConfig::new(w).unwrap();
        let mut s: Vec<Element<(Word, usize)>> =
            keys.iter().enumerate().map(|(i, &k)| Element::new(k, (k, i))).collect();
        sort_by_key(&mut s, cfg).unwrap();
        prop_assert!(s.windows(2).all(|p| p[0].key <= p[1].key));
        prop_assert!(s.iter().all(|e| e.payload.0 == e.key));
        let mut ids: Vec<usize> = s.iter().map(|e| e.payload.1).collect();
        ids.sort();
        prop_assert_eq!(ids, (0..keys.len()).collect::<Vec<_>>());
    }

    #[test]
    fn pass_counts_follow_interval_coverage((w, input) in segment()) {
        let cfg = WordConfig::new(w).unwrap();
        for algo in [Algorithm::AssocSeq, Algorithm::AssocRec, Algorithm::AssocImproved, Algorithm::PermRank] {
            let mut s = input.clone();
            let st = sort_words(algo, &mut s, cfg).unwrap();
            prop_assert_eq!(st.passes as usize, pass_model(algo, &input, w).len(), "{}", algo);
        }
        let mut set = input.clone();
        set.sort();
        set.dedup();
        set.reverse();
        for algo in [Algorithm::CycleDistinct, Algorithm::DistinctImproved] {
            let mut s = set.clone();
            let st = sort_words(algo, &mut s, cfg).unwrap();
            prop_assert_eq!(st.passes as usize, pass_model(algo, &set, w).len(), "{}", algo);
        }
    }
}

/// Runs the rank-sort phases of the first pass by hand.
fn first_pass_state(keys: &[Word], cfg: WordConfig) -> (Vec<Element<usize>>, usize, Interval) {
    let mut s: Vec<Element<usize>> = keys.iter().enumerate().map(|(i, &k)| Element::new(k, i)).collect();
    let delta = *keys.iter().min().unwrap();
    let iv = Interval::new(delta, s.len(), 0);
    let mut st = OpCounters::default();
    let sum = practice_rank(&mut s, iv, cfg, &mut st);
    accumulate_records(&mut s, sum.nodes, cfg);
    repractice_idle(&mut s, iv, cfg, &mut st).unwrap();
    (s, sum.practiced(), iv)
}

fn for_each_small_input(max_n: usize, values: Word, mut f: impl FnMut(&[Word])) {
    for n in 1..=max_n {
        let mut v = vec![0; n];
        loop {
            f(&v);
            let mut i = 0;
            while i < n && v[i] + 1 == values {
                v[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
            v[i] += 1;
        }
    }
}

#[test]
fn tickets_are_complete() {
    let cfg = WordConfig::new(8).unwrap();
    for_each_small_input(6, 9, |keys| {
        let (s, practiced, _) = first_pass_state(keys, cfg);
        let mut dest: Vec<Word> = s
            .iter()
            .filter_map(|e| {
                if cfg.is_node(e.key) {
                    Some(cfg.decode_record(e.key))
                } else if e.key < practiced as Word {
                    Some(e.key)
                } else {
                    None
                }
            })
            .collect();
        dest.sort();
        assert_eq!(dest, (0..practiced as Word).collect::<Vec<_>>(), "{keys:?}");
    });
}

#[test]
fn reactivation_is_a_permutation_with_node_cues() {
    let cfg = WordConfig::new(8).unwrap();
    for_each_small_input(6, 9, |keys| {
        let (mut s, practiced, iv) = first_pass_state(keys, cfg);
        // Shadow map from each node's payload to the key that created it.
        let shadow: BTreeMap<usize, Word> = s
            .iter()
            .enumerate()
            .filter(|(_, e)| cfg.is_node(e.key))
            .map(|(i, e)| (e.payload, iv.linear_unhash(i)))
            .collect();
        reactivate(&mut s, practiced, cfg, &mut OpCounters::default()).unwrap();
        let mut ids: Vec<usize> = s.iter().map(|e| e.payload).collect();
        ids.sort();
        assert_eq!(ids, (0..keys.len()).collect::<Vec<_>>());
        for e in s.iter().filter(|e| cfg.is_node(e.key)) {
            let cue = cfg.decode_record(e.key) as usize;
            assert_eq!(iv.linear_unhash(cue), shadow[&e.payload], "{keys:?}");
        }
        for (i, e) in s[..practiced].iter().enumerate() {
            if !cfg.is_node(e.key) {
                assert_eq!(e.key, i as Word);
            }
        }
        restore_keys(&mut s, practiced, iv, cfg, &mut OpCounters::default()).unwrap();
        for e in &s[..practiced] {
            assert_eq!(e.key, keys[e.payload], "{keys:?}");
        }
        let tail: Vec<Word> = s[practiced..].iter().map(|e| e.key).collect();
        assert!(tail.iter().all(|&k| !iv.contains(k)));
    });
}

#[test]
fn rank_sort_prefix_is_final_after_each_pass() {
    let mut r = rng(21);
    let cfg = WordConfig::new(32).unwrap();
    for (n, m) in [(200usize, 20_000u64), (1000, 100_000), (50, 50)] {
        let keys = uniform(&mut r, n, m);
        let expect = sorted(&keys);
        let growth = pass_model(Algorithm::PermRank, &keys, 32);
        let mut s: Vec<Element<u32>> = keys.iter().map(|&k| Element::new(k, 0)).collect();
        let mut rec = Recorder::default();
        sort_by_key_with(&mut s, cfg, &mut rec).unwrap();
        let restores: Vec<&Vec<Word>> = rec
            .snapshots
            .iter()
            .filter(|(_, p, _)| *p == Phase::Restore)
            .map(|(_, _, w)| w)
            .collect();
        assert_eq!(restores.len(), growth.len());
        let mut done = 0;
        for (snap, g) in restores.iter().zip(&growth) {
            done += g;
            assert_eq!(&snap[..done], &expect[..done]);
        }
    }
}

#[test]
fn improved_single_pass_when_range_fits() {
    let mut r = rng(4);
    let cfg = WordConfig::new(63).unwrap();
    let mut per_elem = Vec::new();
    for n in [1000usize, 10_000, 100_000] {
        let input = uniform(&mut r, n, n as Word);
        let mut s = input.clone();
        let st = sort_words(Algorithm::AssocImproved, &mut s, cfg).unwrap();
        assert_eq!(st.passes, 1);
        assert_eq!(s, sorted(&input));
        per_elem.push(st.moves as f64 / n as f64);
    }
    assert!(per_elem.iter().all(|&c| c <= 4.0), "{per_elem:?}");
}

#[test]
fn retrieval_writes_each_practiced_word_once() {
    let mut r = rng(8);
    let cfg = WordConfig::new(16).unwrap();
    for algo in [Algorithm::AssocSeq, Algorithm::AssocImproved] {
        let input = uniform(&mut r, 300, 3000);
        let mut rec = Recorder::default();
        sort_words_with(algo, &mut input.clone(), cfg, &mut rec).unwrap();
        let growth = pass_model(algo, &input, 16);
        let expect = sorted(&input);
        let mut done = 0;
        let retrieves = rec.snapshots.iter().filter(|(_, p, _)| *p == Phase::Retrieve);
        for ((_, _, snap), g) in retrieves.zip(&growth) {
            done += g;
            assert_eq!(&snap[..done], &expect[..done], "{algo}");
        }
    }
}
