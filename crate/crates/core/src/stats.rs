//! Operation counters and phase observers.

use std::fmt;

use crate::word_model::Word;

/// Counters collected by every driver.
///
/// `moves` counts word or element swaps and writes; record increments in
/// place are not moves.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounters {
    pub passes: u64,
    pub moves: u64,
    pub node_creations: u64,
}

impl OpCounters {
    #[inline]
    pub(crate) fn moved(&mut self, k: u64) {
        self.moves += k;
    }
}

/// Algorithm phase reported to a [`Probe`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    Practice,
    Partition,
    Store,
    Retrieve,
    Accumulate,
    Repractice,
    Reactivate,
    Restore,
    /// Split of the full universe on the tag bit.
    Split,
}

impl Phase {
    pub fn as_str(&self) -> &'static str {
        match self {
            Phase::Practice => "practice",
            Phase::Partition => "partition",
            Phase::Store => "store",
            Phase::Retrieve => "retrieve",
            Phase::Accumulate => "accumulate",
            Phase::Repractice => "repractice",
            Phase::Reactivate => "reactivate",
            Phase::Restore => "restore",
            Phase::Split => "split",
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Observer invoked after each phase of a pass.
///
/// `words` is the whole array handed to the driver (keys only for element
/// arrays). Drivers skip building snapshots unless [`Probe::enabled`]
/// returns true.
pub trait Probe {
    fn enabled(&self) -> bool {
        true
    }

    fn phase_done(&mut self, pass: u64, phase: Phase, words: &[Word]);
}

/// Probe that ignores everything.
#[derive(Debug, Default, Clone, Copy)]
pub struct NoProbe;

impl Probe for NoProbe {
    fn enabled(&self) -> bool {
        false
    }

    fn phase_done(&mut self, _: u64, _: Phase, _: &[Word]) {}
}

/// Probe that records every snapshot; used by tests and tracing.
#[derive(Debug, Default, Clone)]
pub struct Recorder {
    pub snapshots: Vec<(u64, Phase, Vec<Word>)>,
}

impl Probe for Recorder {
    fn phase_done(&mut self, pass: u64, phase: Phase, words: &[Word]) {
        self.snapshots.push((pass, phase, words.to_vec()));
    }
}
