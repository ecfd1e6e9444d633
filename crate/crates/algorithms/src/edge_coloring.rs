use graph_core::Label;
use pps::RngStream;
use serde::Serialize;
use transformer::{EdgeDetect, EdgePhase, EdgeView};

use crate::AlgorithmError;

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct EdgeColorRegs {
    /// `c_v(u)` per port.
    pub proposals: Vec<Option<u16>>,
    /// Candidate color `c_e` per port.
    pub candidates: Vec<Option<Label>>,
    pub accepts: Vec<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EdgeColorMsg {
    Propose(u16),
    Accept(bool),
}

/// Proposal/accept edge coloring phase of length 5 over `palette` colors.
#[derive(Debug, Clone, Copy)]
pub struct EdgeColoringPhase {
    palette: u16,
}

impl EdgeColoringPhase {
    /// Needs a palette of at least 2Δ+1 colors.
    pub fn new(palette: usize, delta: usize) -> Result<Self, AlgorithmError> {
        if palette < 2 * delta + 1 || palette > u16::MAX as usize {
            return Err(AlgorithmError::PaletteTooSmall { palette, needed: 2 * delta + 1 });
        }
        Ok(EdgeColoringPhase { palette: palette as u16 })
    }

    pub fn palette(&self) -> usize {
        self.palette as usize
    }

    /// `c_e = 1 + ((a + b) mod |O|)`.
    pub fn candidate(&self, a: u16, b: u16) -> Label {
        Label(1 + ((a as u32 + b as u32) % self.palette as u32) as u16)
    }
}

impl EdgePhase for EdgeColoringPhase {
    type Regs = EdgeColorRegs;
    type Payload = EdgeColorMsg;

    fn phi(&self) -> u16 {
        5
    }

    fn fresh_regs(&self, degree: usize) -> EdgeColorRegs {
        EdgeColorRegs { proposals: vec![None; degree], candidates: vec![None; degree], accepts: vec![false; degree] }
    }

    fn random_regs(&self, degree: usize, _delta: usize, rng: &mut RngStream) -> EdgeColorRegs {
        let p = self.palette as usize;
        EdgeColorRegs {
            proposals: (0..degree).map(|_| rng.coin().then(|| 1 + rng.below(p) as u16)).collect(),
            candidates: (0..degree).map(|_| rng.coin().then(|| Label(1 + rng.below(p) as u16))).collect(),
            accepts: (0..degree).map(|_| rng.coin()).collect(),
        }
    }

    fn reshape_regs(&self, regs: &mut EdgeColorRegs, map: &[Option<usize>]) {
        regs.proposals = map.iter().map(|q| q.and_then(|q| regs.proposals.get(q).copied().flatten())).collect();
        regs.candidates = map.iter().map(|q| q.and_then(|q| regs.candidates.get(q).copied().flatten())).collect();
        regs.accepts = map.iter().map(|q| q.is_some_and(|q| regs.accepts.get(q).copied().unwrap_or(false))).collect();
    }

    fn random_payload(&self, _delta: usize, rng: &mut RngStream) -> EdgeColorMsg {
        if rng.coin() {
            EdgeColorMsg::Propose(1 + rng.below(self.palette as usize) as u16)
        } else {
            EdgeColorMsg::Accept(rng.coin())
        }
    }

    fn step(
        &self,
        j: u16,
        view: &EdgeView<'_, EdgeColorMsg>,
        regs: &mut EdgeColorRegs,
        rng: &mut RngStream,
        send: &mut [Option<EdgeColorMsg>],
    ) -> Vec<(usize, Label)> {
        let d = view.engaged.len();
        regs.proposals.resize(d, None);
        regs.candidates.resize(d, None);
        regs.accepts.resize(d, false);
        let engaged = || (0..d).filter(|&p| view.engaged[p]);
        match j {
            1 => {
                for p in engaged() {
                    let c = 1 + rng.below(self.palette as usize) as u16;
                    regs.proposals[p] = Some(c);
                    send[p] = Some(EdgeColorMsg::Propose(c));
                }
                Vec::new()
            }
            2 => {
                for p in engaged() {
                    regs.candidates[p] = match (regs.proposals[p], &view.received[p]) {
                        (Some(a), Some(EdgeColorMsg::Propose(b))) => Some(self.candidate(a, *b)),
                        _ => None,
                    };
                }
                Vec::new()
            }
            3 => {
                for p in engaged() {
                    let ok = regs.candidates[p].is_some_and(|c| {
                        let sibling = engaged().any(|q| q != p && regs.candidates[q] == Some(c));
                        let decided = view.outs.iter().any(|o| *o == Some(c));
                        !sibling && !decided
                    });
                    regs.accepts[p] = ok;
                    send[p] = Some(EdgeColorMsg::Accept(ok));
                }
                Vec::new()
            }
            _ => engaged()
                .filter(|&p| regs.accepts[p] && view.received[p] == Some(EdgeColorMsg::Accept(true)))
                .filter_map(|p| regs.candidates[p].map(|c| (p, c)))
                .collect(),
        }
    }
}

/// Detection with one bit besides the output: whether the sender's color
/// on this edge is unique among its edges.
#[derive(Debug, Clone, Copy, Default)]
pub struct EdgeColoringDetect;

fn unique(outs: &[Option<Label>], port: usize) -> bool {
    match outs.get(port).copied().flatten() {
        None => true,
        Some(c) => outs.iter().enumerate().all(|(w, o)| w == port || *o != Some(c)),
    }
}

impl EdgeDetect for EdgeColoringDetect {
    type Extra = bool;

    fn extra(&self, outs: &[Option<Label>], port: usize) -> bool {
        unique(outs, port)
    }

    fn verdict(&self, outs: &[Option<Label>], port: usize, flag: &bool) -> bool {
        outs[port].is_none() || (*flag && unique(outs, port))
    }

    fn random_extra(&self, rng: &mut RngStream) -> bool {
        rng.coin()
    }
}
