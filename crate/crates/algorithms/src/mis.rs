use graph_core::{Label, Multiset};
use lcl_core::{IN, OUT};
use pps::RngStream;
use serde::Serialize;
use transformer::{NodePhase, WorkView};

/// Phase registers shared by the MIS and incremental-coloring phases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct MarkRegs {
    pub marked: bool,
    /// Degree in the undecided subgraph, `d_H(v)`.
    pub my_deg: usize,
}

/// `(marked, d_H)` as sent at step 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Mark {
    pub marked: bool,
    pub degree: usize,
}

/// Marks with probability `1/d_H`, or surely when `d_H = 0`.
pub(crate) fn mark(view: &WorkView<'_, Mark>, regs: &mut MarkRegs, rng: &mut RngStream) -> Mark {
    let d = view.engaged;
    regs.my_deg = d;
    regs.marked = d == 0 || rng.below(d) == 0;
    Mark { marked: regs.marked, degree: d }
}

/// Marked, with a strictly larger degree than every marked neighbor.
pub(crate) fn strict_max(view: &WorkView<'_, Mark>, regs: &MarkRegs) -> bool {
    regs.marked && view.received.iter().filter(|m| m.marked).all(|m| m.degree < regs.my_deg)
}

pub(crate) fn random_mark_regs(delta: usize, rng: &mut RngStream) -> MarkRegs {
    MarkRegs { marked: rng.coin(), my_deg: rng.below(delta + 1) }
}

pub(crate) fn random_mark(delta: usize, rng: &mut RngStream) -> Mark {
    Mark { marked: rng.coin(), degree: rng.below(delta + 1) }
}

/// Luby-style MIS phase of length 3.
#[derive(Debug, Clone, Copy, Default)]
pub struct MisPhase;

impl NodePhase for MisPhase {
    type Regs = MarkRegs;
    type Payload = Mark;
    /// Whether the node is a candidate for IN.
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
        if decided.contains(IN) {
            Some(OUT)
        } else if *candidate {
            Some(IN)
        } else {
            None
        }
    }
}
