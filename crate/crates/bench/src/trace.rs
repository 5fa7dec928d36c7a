//! Line-delimited JSON snapshots of the array after each phase.

use std::io::{self, Write};

use assoc_sort::{Recorder, WordConfig};
use serde::Serialize;

/// Arrays longer than this are never traced.
pub const MAX_TRACE_LEN: usize = 64;

#[derive(Serialize)]
struct Cell {
    word: u64,
    tagged: bool,
}

#[derive(Serialize)]
struct Snapshot<'a> {
    phase: &'a str,
    pass: u64,
    array: Vec<Cell>,
}

pub struct TraceWriter<W: Write> {
    out: W,
}

impl<W: Write> TraceWriter<W> {
    pub fn new(out: W) -> Self {
        Self { out }
    }

    pub fn write_all(&mut self, rec: &Recorder, cfg: WordConfig) -> io::Result<()> {
        for (pass, phase, words) in &rec.snapshots {
            let snap = Snapshot {
                phase: phase.as_str(),
                pass: *pass,
                array: words
                    .iter()
                    .map(|&word| Cell { word, tagged: cfg.is_node(word) })
                    .collect(),
            };
            serde_json::to_writer(&mut self.out, &snap)?;
            self.out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn flush(&mut self) -> io::Result<()> {
        self.out.flush()
    }
}
