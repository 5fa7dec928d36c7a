use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{Context, Result};
use assoc_bench::runner::{csv_writer, summarize};
use assoc_bench::trace::{TraceWriter, MAX_TRACE_LEN};
use assoc_bench::{run_bench, AlgoId, Dist, Scenario};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "bench", about = "Benchmark and verify the associative sorts")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a scenario grid and write one CSV row per trial.
    Run(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Algorithm ids, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    algo: Vec<AlgoId>,
    /// Array lengths, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    /// Range-to-length ratios m/n, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    ratio: Vec<f64>,
    #[arg(long, default_value = "uniform")]
    dist: Dist,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    trials: u64,
    /// Virtual word width in bits.
    #[arg(long, default_value_t = 64)]
    vw: u32,
    /// Check every output against the reference sort; abort on mismatch.
    #[arg(long)]
    verify: bool,
    /// Threads used for verification (timing always runs alone).
    #[arg(long, default_value_t = 1)]
    verify_threads: usize,
    /// CSV output path; `-` for stdout.
    #[arg(long, default_value = "-")]
    csv: PathBuf,
    /// JSONL phase snapshots, written for arrays of at most 64 words.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Print median times and ratios to stderr when done.
    #[arg(long)]
    summary: bool,
}

fn open(path: &PathBuf) -> Result<Box<dyn Write>> {
    if path.as_os_str() == "-" {
        return Ok(Box::new(io::stdout().lock()));
    }
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(Box::new(BufWriter::new(f)))
}

fn run(a: RunArgs) -> Result<()> {
    let sc = Scenario {
        algos: a.algo,
        ns: a.n,
        ratios: a.ratio,
        dist: a.dist,
        seed: a.seed,
        trials: a.trials,
        width: a.vw,
        verify: a.verify,
        verify_threads: a.verify_threads.max(1),
    };
    let mut trace = match &a.trace {
        Some(p) => {
            if sc.ns.iter().any(|&n| n > MAX_TRACE_LEN) {
                eprintln!("note: arrays longer than {MAX_TRACE_LEN} words are not traced");
            }
            Some(TraceWriter::new(open(p)?))
        }
        None => None,
    };
    let mut out = csv_writer(open(&a.csv)?);
    let mut rows = Vec::new();
    run_bench(&sc, trace.as_mut(), |row| {
        out.serialize(row).map_err(io::Error::other)?;
        if a.summary {
            rows.push(row.clone());
        }
        Ok(())
    })?;
    out.flush()?;
    if let Some(t) = trace.as_mut() {
        t.flush()?;
    }
    for line in summarize(&rows) {
        eprintln!("{line}");
    }
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().cmd {
        Cmd::Run(a) => run(a),
    }
}
