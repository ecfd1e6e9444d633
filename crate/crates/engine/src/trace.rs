use std::io;

use graph_core::{Configuration, Graph};
use lcl_core::{potential, uncontent, LclSpec, PotentialSpec};
use serde::{Deserialize, Serialize};

/// One JSON line per round.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub round: u64,
    pub num_undecided: usize,
    pub potential: u64,
    pub num_uncontent: usize,
    /// Elements whose value differs from the previous record.
    pub changed_nodes: Vec<usize>,
}

impl TraceRecord {
    pub fn capture(
        round: u64,
        g: &Graph,
        c: &Configuration,
        previous: Option<&Configuration>,
        lcl: &LclSpec,
        pot: &PotentialSpec,
    ) -> Self {
        let changed_nodes = match previous {
            Some(p) if p.len() == c.len() => (0..c.len()).filter(|&x| p.get(x) != c.get(x)).collect(),
            Some(_) => (0..c.len()).collect(),
            None => Vec::new(),
        };
        TraceRecord {
            round,
            num_undecided: c.undecided(g).len(),
            potential: potential(pot, g, c).expect("potential kind matches"),
            num_uncontent: uncontent(lcl, g, c).len(),
            changed_nodes,
        }
    }
}

/// Writes records as JSON lines.
pub struct TraceWriter<W: io::Write> {
    out: W,
}

impl<W: io::Write> TraceWriter<W> {
    pub fn new(out: W) -> Self {
        TraceWriter { out }
    }

    pub fn write(&mut self, r: &TraceRecord) -> io::Result<()> {
        serde_json::to_writer(&mut self.out, r)?;
        self.out.write_all(b"\n")
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}
