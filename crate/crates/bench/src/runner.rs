//! Scenario execution: generate, time, count, verify, emit rows.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use assoc_sort::{sort_words, sort_words_with, Algorithm, OpCounters, Word, WordConfig};
use serde::Serialize;

use crate::baseline::{run_baseline, Baseline};
use crate::gen::{cell_seed, generate, Dist};
use crate::oracle::{first_divergence, reference_sort};
use crate::trace::TraceWriter;

/// Anything `bench run --algo` accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlgoId {
    Assoc(Algorithm),
    Baseline(Baseline),
}

impl AlgoId {
    pub fn as_str(&self) -> &'static str {
        match self {
            AlgoId::Assoc(a) => a.as_str(),
            AlgoId::Baseline(b) => b.as_str(),
        }
    }

    fn applicable(&self, dist: Dist) -> bool {
        match self {
            AlgoId::Assoc(a) => !a.requires_distinct() || dist == Dist::Distinct,
            AlgoId::Baseline(_) => true,
        }
    }
}

impl fmt::Display for AlgoId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AlgoId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if let Ok(a) = s.parse::<Algorithm>() {
            return Ok(AlgoId::Assoc(a));
        }
        s.parse::<Baseline>()
            .map(AlgoId::Baseline)
            .map_err(|_| format!("unknown algorithm `{s}`"))
    }
}

/// One benchmark observation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BenchRow {
    pub algo: String,
    pub n: usize,
    pub m: Word,
    pub dist: String,
    pub seed: u64,
    pub trial: u64,
    pub elapsed_ns: u128,
    pub passes: u64,
    pub moves: u64,
    pub node_creations: u64,
    pub verified: bool,
}

/// Cartesian product of runs.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub algos: Vec<AlgoId>,
    pub ns: Vec<usize>,
    pub ratios: Vec<f64>,
    pub dist: Dist,
    pub seed: u64,
    pub trials: u64,
    pub width: u32,
    pub verify: bool,
    /// Worker threads for verification; 1 verifies inline.
    pub verify_threads: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("{algo} does not apply to {dist} inputs")]
    NotApplicable { algo: AlgoId, dist: Dist },
    #[error("range m = {m} needs more than {width}-bit words (n = {n}, ratio = {ratio})")]
    RangeTooWide { n: usize, m: Word, ratio: f64, width: u32 },
    #[error(
        "verification failed: {algo} n={n} m={m} trial={trial}: first divergence at index {index} \
         (got {got:?}, expected {expected:?})"
    )]
    Mismatch {
        algo: AlgoId,
        n: usize,
        m: Word,
        trial: u64,
        index: usize,
        got: Option<Word>,
        expected: Option<Word>,
    },
    #[error(transparent)]
    Sort(#[from] assoc_sort::SortError),
    #[error(transparent)]
    Gen(#[from] crate::gen::GenError),
    #[error(transparent)]
    Baseline(#[from] crate::baseline::RangeTooLarge),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Range for `n` keys at ratio `m / n`, at least 1.
pub fn range_for(n: usize, ratio: f64) -> Word {
    ((n as f64 * ratio).round() as Word).max(1)
}

/// Sorts one array with `algo`; returns the counters (zero for baselines).
pub fn sort_once(algo: AlgoId, s: &mut [Word], m: Word, cfg: WordConfig) -> Result<OpCounters, BenchError> {
    match algo {
        AlgoId::Assoc(a) => Ok(sort_words(a, s, cfg)?),
        AlgoId::Baseline(b) => {
            run_baseline(b, s, m)?;
            Ok(OpCounters::default())
        }
    }
}

/// Median wall time of `trials` sorts of fresh copies of `input`.
pub fn median_ns(algo: AlgoId, input: &[Word], m: Word, cfg: WordConfig, trials: usize) -> Result<u128, BenchError> {
    let mut times = Vec::with_capacity(trials);
    for _ in 0..trials {
        let mut s = input.to_vec();
        let t = Instant::now();
        sort_once(algo, &mut s, m, cfg)?;
        times.push(t.elapsed().as_nanos());
    }
    times.sort();
    Ok(times[times.len() / 2])
}

fn mismatch(algo: AlgoId, n: usize, m: Word, trial: u64, got: &[Word], original: &[Word]) -> Option<BenchError> {
    let index = first_divergence(got, original)?;
    let expect = reference_sort(original);
    Some(BenchError::Mismatch {
        algo,
        n,
        m,
        trial,
        index,
        got: got.get(index).copied(),
        expected: expect.get(index).copied(),
    })
}

impl Scenario {
    fn check(&self) -> Result<(), BenchError> {
        let cfg = WordConfig::new(self.width)?;
        for &algo in &self.algos {
            if !algo.applicable(self.dist) {
                return Err(BenchError::NotApplicable { algo, dist: self.dist });
            }
        }
        for &n in &self.ns {
            cfg.check_len(n)?;
            for &ratio in &self.ratios {
                let m = range_for(n, ratio);
                if m - 1 > cfg.value_mask() {
                    return Err(BenchError::RangeTooWide { n, m, ratio, width: self.width });
                }
            }
        }
        Ok(())
    }

    /// Number of rows [`run_bench`] will emit.
    pub fn row_count(&self) -> usize {
        self.algos.len() * self.ns.len() * self.ratios.len() * self.trials as usize
    }
}

/// Runs every cell of `sc` in order, handing each row to `sink`.
///
/// Inputs depend only on `(seed, n, m, dist, trial)`, so every algorithm of a
/// cell sorts the same arrays. When `trace` is given, arrays of at most 64
/// words are re-sorted once more under a recording probe, outside the timed
/// region.
pub fn run_bench(
    sc: &Scenario,
    mut trace: Option<&mut TraceWriter<Box<dyn Write>>>,
    mut sink: impl FnMut(&BenchRow) -> Result<(), BenchError>,
) -> Result<(), BenchError> {
    sc.check()?;
    let cfg = WordConfig::new(sc.width)?;
    for &n in &sc.ns {
        for &ratio in &sc.ratios {
            let m = range_for(n, ratio);
            for &algo in &sc.algos {
                let mut pending: Vec<(BenchRow, Vec<Word>, Vec<Word>)> = Vec::new();
                for trial in 0..sc.trials {
                    let input = generate(sc.dist, n, m, cell_seed(sc.seed, n, m, sc.dist, trial))?;
                    let mut s = input.clone();
                    let t = Instant::now();
                    let counters = sort_once(algo, &mut s, m, cfg)?;
                    let elapsed_ns = t.elapsed().as_nanos();
                    if let (Some(tw), AlgoId::Assoc(a)) = (trace.as_deref_mut(), algo) {
                        if n <= crate::trace::MAX_TRACE_LEN {
                            let mut copy = input.clone();
                            let mut rec = assoc_sort::Recorder::default();
                            sort_words_with(a, &mut copy, cfg, &mut rec)?;
                            tw.write_all(&rec, cfg)?;
                        }
                    }
                    let row = BenchRow {
                        algo: algo.to_string(),
                        n,
                        m,
                        dist: sc.dist.to_string(),
                        seed: sc.seed,
                        trial,
                        elapsed_ns,
                        passes: counters.passes,
                        moves: counters.moves,
                        node_creations: counters.node_creations,
                        verified: sc.verify,
                    };
                    if !sc.verify {
                        sink(&row)?;
                    } else if sc.verify_threads <= 1 {
                        if let Some(e) = mismatch(algo, n, m, trial, &s, &input) {
                            return Err(e);
                        }
                        sink(&row)?;
                    } else {
                        pending.push((row, s, input));
                    }
                }
                if !pending.is_empty() {
                    verify_parallel(algo, n, m, &pending, sc.verify_threads)?;
                    for (row, _, _) in &pending {
                        sink(row)?;
                    }
                }
            }
        }
    }
    Ok(())
}

fn verify_parallel(
    algo: AlgoId,
    n: usize,
    m: Word,
    pending: &[(BenchRow, Vec<Word>, Vec<Word>)],
    threads: usize,
) -> Result<(), BenchError> {
    let chunk = pending.len().div_ceil(threads);
    let failure = std::thread::scope(|scope| {
        let handles: Vec<_> = pending
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    part.iter()
                        .find_map(|(row, got, input)| mismatch(algo, n, m, row.trial, got, input))
                })
            })
            .collect();
        handles
            .into_iter()
            .filter_map(|h| h.join().expect("verification thread panicked"))
            .min_by_key(|e| match e {
                BenchError::Mismatch { trial, .. } => *trial,
                _ => u64::MAX,
            })
    });
    failure.map_or(Ok(()), Err)
}

/// Writes rows as CSV with LF line endings.
pub fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

/// Median elapsed time per `(algo, n, m)` and its ratio to the first
/// algorithm of the same cell.
pub fn summarize(rows: &[BenchRow]) -> Vec<String> {
    let mut cells: Vec<(String, usize, Word, Vec<u128>)> = Vec::new();
    for r in rows {
        match cells.iter_mut().find(|c| c.0 == r.algo && c.1 == r.n && c.2 == r.m) {
            Some(c) => c.3.push(r.elapsed_ns),
            None => cells.push((r.algo.clone(), r.n, r.m, vec![r.elapsed_ns])),
        }
    }
    let medians: Vec<(String, usize, Word, u128)> = cells
        .into_iter()
        .map(|(a, n, m, mut t)| {
            t.sort();
            (a, n, m, t[t.len() / 2])
        })
        .collect();
    medians
        .iter()
        .map(|(a, n, m, t)| {
            let first = medians.iter().find(|c| c.1 == *n && c.2 == *m).expect("own cell");
            let ratio = *t as f64 / first.3.max(1) as f64;
            format!("{a:>18} n={n:<9} m={m:<12} median_ns={t:<12} vs {}: {ratio:.3}", first.0)
        })
        .collect()
}
