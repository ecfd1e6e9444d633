use graph_core::{Label, Multiset};
use pps::RngStream;
use serde::Serialize;
use transformer::{NodePhase, WorkView};

use crate::AlgorithmError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ColorVerdict {
    /// No engaged neighbor: take the lowest free color.
    Free,
    /// Proposal clashes with no engaged neighbor's proposal.
    Propose(Label),
    Pass,
}

/// Random-proposal coloring phase of length 3 over `palette` colors.
#[derive(Debug, Clone, Copy)]
pub struct ColoringPhase {
    palette: u16,
}

impl ColoringPhase {
    /// Needs a palette of at least Δ+1 colors.
    pub fn new(palette: usize, delta: usize) -> Result<Self, AlgorithmError> {
        if palette < delta + 1 || palette > u16::MAX as usize {
            return Err(AlgorithmError::PaletteTooSmall { palette, needed: delta + 1 });
        }
        Ok(ColoringPhase { palette: palette as u16 })
    }

    pub fn palette(&self) -> usize {
        self.palette as usize
    }
}

impl NodePhase for ColoringPhase {
    type Regs = Option<Label>;
    type Payload = Label;
    type Verdict = ColorVerdict;

    fn phi(&self) -> u16 {
        3
    }

    fn fresh_regs(&self) -> Option<Label> {
        None
    }

    fn random_regs(&self, _delta: usize, rng: &mut RngStream) -> Option<Label> {
        rng.coin().then(|| Label(1 + rng.below(self.palette as usize) as u16))
    }

    fn random_payload(&self, _delta: usize, rng: &mut RngStream) -> Label {
        Label(1 + rng.below(self.palette as usize) as u16)
    }

    fn random_verdict(&self, _delta: usize, rng: &mut RngStream) -> ColorVerdict {
        match rng.below(3) {
            0 => ColorVerdict::Free,
            1 => ColorVerdict::Propose(self.random_payload(0, rng)),
            _ => ColorVerdict::Pass,
        }
    }

    fn work(&self, _j: u16, view: &WorkView<'_, Label>, regs: &mut Option<Label>, rng: &mut RngStream) -> Option<Label> {
        if view.engaged == 0 {
            *regs = None;
            return None;
        }
        let c = Label(1 + rng.below(self.palette as usize) as u16);
        *regs = Some(c);
        Some(c)
    }

    fn decide(&self, view: &WorkView<'_, Label>, regs: &Option<Label>) -> ColorVerdict {
        match regs {
            _ if view.engaged == 0 => ColorVerdict::Free,
            Some(c) if !view.received.contains(c) => ColorVerdict::Propose(*c),
            _ => ColorVerdict::Pass,
        }
    }

    fn resolve(&self, verdict: &ColorVerdict, decided: &Multiset) -> Option<Label> {
        match verdict {
            ColorVerdict::Free => (1..=self.palette).map(Label).find(|&c| !decided.contains(c)),
            ColorVerdict::Propose(c) if !decided.contains(*c) => Some(*c),
            _ => None,
        }
    }
}
