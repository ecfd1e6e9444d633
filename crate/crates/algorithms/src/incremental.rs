use graph_core::{Label, Multiset};
use pps::RngStream;
use transformer::{NodePhase, WorkView};

use crate::mis::{mark, random_mark, random_mark_regs, strict_max, Mark, MarkRegs};

/// Incremental c-coloring phase: MIS marking, then the smallest color
/// allowed by the decided neighbors.
#[derive(Debug, Clone, Copy)]
pub struct IncrementalPhase {
    c: u16,
}

impl IncrementalPhase {
    pub fn new(c: usize) -> Self {
        assert!(c >= 2, "incremental coloring needs c ≥ 2");
        IncrementalPhase { c: c as u16 }
    }

    pub fn c(&self) -> usize {
        self.c as usize
    }
}

impl NodePhase for IncrementalPhase {
    type Regs = MarkRegs;
    type Payload = Mark;
    type Verdict = bool;

    fn phi(&self) -> u16 {
        3
    }

    fn fresh_regs(&self) -> MarkRegs {
        MarkRegs::default()
    }

    fn random_regs(&self, delta: usize, rng: &mut RngStream) -> MarkRegs {
        random_mark_regs(delta, rng)
    }

    fn random_payload(&self, delta: usize, rng: &mut RngStream) -> Mark {
        random_mark(delta, rng)
    }

    fn random_verdict(&self, _delta: usize, rng: &mut RngStream) -> bool {
        rng.coin()
    }

    fn work(&self, _j: u16, view: &WorkView<'_, Mark>, regs: &mut MarkRegs, rng: &mut RngStream) -> Option<Mark> {
        Some(mark(view, regs, rng))
    }

    fn decide(&self, view: &WorkView<'_, Mark>, regs: &MarkRegs) -> bool {
        strict_max(view, regs)
    }

    fn resolve(&self, candidate: &bool, decided: &Multiset) -> Option<Label> {
        let c = self.c as usize;
        if decided.count_upto(c - 1) >= c - 1 {
            return Some(Label(self.c));
        }
        if !*candidate {
            return None;
        }
        (1..c).find(|&i| !decided.contains(Label(i as u16)) && decided.count_upto(i - 1) >= i - 1).map(|i| Label(i as u16))
    }
}
