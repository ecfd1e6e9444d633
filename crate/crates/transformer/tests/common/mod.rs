#![allow(dead_code)]

use graph_core::{Label, Multiset};
use lcl_core::{IN, OUT};
use pps::RngStream;
use transformer::{EdgeDetect, EdgePhase, EdgeView, NodePhase, WorkView};

/// Minimal marking MIS phase for exercising the transformers.
#[derive(Debug, Clone, Copy)]
pub struct ToyMis;

impl NodePhase for ToyMis {
    type Regs = (bool, usize);
    type Payload = (bool, usize);
    type Verdict = bool;

    fn phi(&self) -> u16 {
        3
    }
    fn fresh_regs(&self) -> Self::Regs {
        (false, 0)
    }
    fn random_regs(&self, delta: usize, rng: &mut RngStream) -> Self::Regs {
        (rng.coin(), rng.below(delta + 1))
    }
    fn random_payload(&self, delta: usize, rng: &mut RngStream) -> Self::Payload {
        (rng.coin(), rng.below(delta + 1))
    }
    fn random_verdict(&self, _delta: usize, rng: &mut RngStream) -> bool {
        rng.coin()
    }
    fn work(&self, _j: u16, view: &WorkView<'_, Self::Payload>, regs: &mut Self::Regs, rng: &mut RngStream) -> Option<Self::Payload> {
        let d = view.engaged;
        *regs = (rng.below(d + 1) == 0, d);
        Some(*regs)
    }
    fn decide(&self, view: &WorkView<'_, Self::Payload>, regs: &Self::Regs) -> bool {
        regs.0 && view.received.iter().filter(|m| m.0).all(|m| m.1 < regs.1)
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

/// Matching phase of length 2: every engaged port proposes a coin, an
/// edge becomes Mat when both ends sent 1 on it and nothing else here or
/// there is Mat or proposed. Kept trivially respectful: a node commits Mat
/// on at most one port and only if it has no Mat yet.
#[derive(Debug, Clone, Copy)]
pub struct ToyMatching;

impl EdgePhase for ToyMatching {
    type Regs = Option<usize>;
    type Payload = bool;

    fn phi(&self) -> u16 {
        3
    }
    fn fresh_regs(&self, _degree: usize) -> Self::Regs {
        None
    }
    fn random_regs(&self, degree: usize, _delta: usize, rng: &mut RngStream) -> Self::Regs {
        (degree > 0 && rng.coin()).then(|| rng.below(degree))
    }
    fn reshape_regs(&self, regs: &mut Self::Regs, map: &[Option<usize>]) {
        *regs = regs.and_then(|p| map.iter().position(|&q| q == Some(p)));
    }
    fn random_payload(&self, _delta: usize, rng: &mut RngStream) -> bool {
        rng.coin()
    }
    fn step(&self, j: u16, view: &EdgeView<'_, bool>, regs: &mut Self::Regs, rng: &mut RngStream, send: &mut [Option<bool>]) -> Vec<(usize, Label)> {
        let ports: Vec<usize> = (0..view.engaged.len()).filter(|&p| view.engaged[p]).collect();
        let has_mat = view.outs.contains(&Some(lcl_core::MAT));
        if j == 1 {
            *regs = None;
            if !has_mat && !ports.is_empty() {
                let p = ports[rng.below(ports.len())];
                *regs = Some(p);
            }
            for &p in &ports {
                send[p] = Some(*regs == Some(p) && !has_mat);
            }
            return Vec::new();
        }
        match *regs {
            Some(p) if view.received.get(p) == Some(&Some(true)) => vec![(p, lcl_core::MAT)],
            _ => Vec::new(),
        }
    }
}

/// Detection for maximal-matching-style outputs: Mat needs no other Mat at
/// either end; UnM is left alone.
#[derive(Debug, Clone, Copy)]
pub struct ToyMatchingDetect;

impl EdgeDetect for ToyMatchingDetect {
    type Extra = bool;
    fn extra(&self, outs: &[Option<Label>], port: usize) -> bool {
        outs.iter().enumerate().any(|(w, o)| w != port && *o == Some(lcl_core::MAT))
    }
    fn verdict(&self, outs: &[Option<Label>], port: usize, flag: &bool) -> bool {
        outs[port] != Some(lcl_core::MAT) || !(*flag || self.extra(outs, port))
    }
    fn random_extra(&self, rng: &mut RngStream) -> bool {
        rng.coin()
    }
}
