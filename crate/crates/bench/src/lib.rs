//! Benchmark and verification harness for `assoc_sort`.

pub mod baseline;
pub mod gen;
pub mod oracle;
pub mod runner;
pub mod trace;

pub use gen::Dist;
pub use runner::{run_bench, AlgoId, BenchError, BenchRow, Scenario};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/benchmarking.md")]
mod book_benchmarking {}
