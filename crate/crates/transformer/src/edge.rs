use graph_core::{Kind, Label};
use lcl_core::{LclSpec, PotentialSpec};
use pps::{PpsState, RngStream, Step, Tag};
use serde::Serialize;

use engine::{Cause, CorruptMask, Params, Protocol, RoundCtx};

use crate::node::reshape_flags;
use crate::phase::{random_label, EdgeDetect, EdgePhase, EdgeView, PhaseField};
use crate::TransformError;

/// Registers of one node under the edge transformer. Outputs and wait
/// flags are per port.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeState<R> {
    pub outs: Vec<Option<Label>>,
    pub waits: Vec<bool>,
    pub pps: PpsState,
    /// `W_v`: ports that announced at step 0.
    pub working: Vec<bool>,
    /// `S_v`: ports engaged in the current phase.
    pub engaged: Vec<bool>,
    pub regs: R,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeMsg<P, X> {
    /// Sender's output register for this edge.
    pub out: Option<Label>,
    pub extra: X,
    pub phase: PhaseField<P>,
    pub pps: Step,
}

/// Self-stabilizing algorithm for an edge-LCL built from a fault-free edge
/// phase procedure and a per-port detection procedure.
#[derive(Debug, Clone)]
pub struct EdgeTransformer<Ph, D> {
    name: String,
    phase: Ph,
    detect: D,
    lcl: LclSpec,
    potential: PotentialSpec,
    nu: usize,
}

impl<Ph: EdgePhase, D: EdgeDetect> EdgeTransformer<Ph, D> {
    pub fn new(
        name: impl Into<String>,
        phase: Ph,
        detect: D,
        lcl: LclSpec,
        potential: PotentialSpec,
        nu: usize,
    ) -> Result<Self, TransformError> {
        if phase.phi() < 2 {
            return Err(TransformError::InvalidPhaseStructure(format!("phase length {} < 2", phase.phi())));
        }
        if lcl.kind() != Kind::Edge {
            return Err(TransformError::InvalidPhaseStructure("edge transformer needs an edge-LCL".into()));
        }
        Ok(EdgeTransformer { name: name.into(), phase, detect, lcl, potential, nu })
    }

    pub fn phase(&self) -> &Ph {
        &self.phase
    }

    pub fn detect(&self) -> &D {
        &self.detect
    }
}

impl<Ph: EdgePhase, D: EdgeDetect> Protocol for EdgeTransformer<Ph, D> {
    type State = EdgeState<Ph::Regs>;
    type Msg = EdgeMsg<Ph::Payload, D::Extra>;

    fn name(&self) -> &str {
        &self.name
    }

    fn kind(&self) -> Kind {
        Kind::Edge
    }

    fn lcl(&self) -> &LclSpec {
        &self.lcl
    }

    fn params(&self) -> Params {
        let phi = self.phase.phi() as usize;
        Params { nu: self.nu, phi, locality_radius: self.nu + phi + 1, strong_offset: self.nu + phi + 3 }
    }

    fn initial_state(&self, degree: usize) -> Self::State {
        EdgeState {
            outs: vec![None; degree],
            waits: vec![false; degree],
            pps: PpsState::hold(self.phase.phi()),
            working: vec![false; degree],
            engaged: vec![false; degree],
            regs: self.phase.fresh_regs(degree),
        }
    }

    fn idle_message(&self) -> Self::Msg {
        EdgeMsg { out: None, extra: self.detect.extra(&[None], 0), phase: PhaseField::Nil, pps: Step::Hold }
    }

    fn random_message(&self, delta: usize, rng: &mut RngStream) -> Self::Msg {
        let out = random_label(self.lcl.alphabet(), rng);
        let extra = self.detect.random_extra(rng);
        let phase = match rng.below(3) {
            0 => PhaseField::Nil,
            1 => PhaseField::Announce(None),
            _ => PhaseField::Work(self.phase.random_payload(delta, rng)),
        };
        let pps = PpsState::random(self.phase.phi(), rng).step();
        EdgeMsg { out, extra, phase, pps }
    }

    fn step(&self, ctx: &mut RoundCtx<'_>, st: &mut Self::State, inbox: &[Self::Msg], outbox: &mut [Self::Msg]) {
        let phi = self.phase.phi();
        let step = st.pps.step();
        let degree = inbox.len();
        for m in outbox.iter_mut() {
            m.phase = PhaseField::Nil;
        }
        if step.is_hold() {
            st.waits.iter_mut().for_each(|w| *w = false);
        }
        let verdicts: Vec<bool> = (0..degree)
            .map(|p| inbox[p].out == st.outs[p] && self.detect.verdict(&st.outs, p, &inbox[p].extra))
            .collect();
        for (p, ok) in verdicts.into_iter().enumerate() {
            if !ok {
                if st.outs[p].is_some() {
                    st.outs[p] = None;
                    ctx.log(p, Cause::Reset, step, phi);
                }
                st.waits[p] = true;
            }
        }
        match step {
            Step::Hold => {}
            Step::At(0) => {
                st.regs = self.phase.fresh_regs(degree);
                st.working = (0..degree).map(|p| st.outs[p].is_none() && !st.waits[p]).collect();
                for (m, _) in outbox.iter_mut().zip(&st.working).filter(|(_, &w)| w) {
                    m.phase = PhaseField::Announce(None);
                }
            }
            Step::At(j) => {
                if j == 1 {
                    st.engaged = (0..degree)
                        .map(|p| st.working[p] && inbox[p].pps == Step::At(0) && inbox[p].phase == PhaseField::Announce(None))
                        .collect();
                }
                st.engaged.resize(degree, false);
                for (e, w) in st.engaged.iter_mut().zip(&st.waits) {
                    *e &= !w;
                }
                let received: Vec<Option<Ph::Payload>> = (0..degree)
                    .map(|p| match &inbox[p].phase {
                        PhaseField::Work(x) if st.engaged[p] => Some(x.clone()),
                        _ => None,
                    })
                    .collect();
                let mut send = vec![None; degree];
                let view = EdgeView { delta: ctx.delta(), engaged: &st.engaged, received: &received, outs: &st.outs };
                let decisions = self.phase.step(j, &view, &mut st.regs, ctx.rng(Tag::Phase), &mut send);
                for (p, x) in send.into_iter().enumerate() {
                    if let (Some(x), true) = (x, st.engaged[p]) {
                        outbox[p].phase = PhaseField::Work(x);
                    }
                }
                if j + 1 == phi {
                    for (p, o) in decisions {
                        if st.engaged[p] && st.outs[p].is_none() {
                            st.outs[p] = Some(o);
                            ctx.log(p, Cause::Decision, step, phi);
                        }
                    }
                }
            }
        }
        for (p, m) in outbox.iter_mut().enumerate() {
            m.out = st.outs[p];
            m.extra = self.detect.extra(&st.outs, p);
            m.pps = step;
        }
        let exit = step.is_hold() && (ctx.forced_sync() || ctx.rng(Tag::Pps).coin());
        st.pps = st.pps.advance_with(exit);
    }

    fn corrupt(&self, st: &mut Self::State, mask: CorruptMask, degree: usize, delta: usize, rng: &mut RngStream) {
        let alphabet = self.lcl.alphabet();
        if mask.out {
            st.outs = (0..degree).map(|_| random_label(alphabet, rng)).collect();
        }
        if mask.step {
            st.pps = PpsState::random(self.phase.phi(), rng);
        }
        if mask.wait {
            st.waits = (0..degree).map(|_| rng.coin()).collect();
        }
        if mask.phase {
            st.working = (0..degree).map(|_| rng.coin()).collect();
            st.engaged = (0..degree).map(|_| rng.coin()).collect();
            st.regs = self.phase.random_regs(degree, delta, rng);
        }
    }

    fn reshape(&self, st: &mut Self::State, map: &[Option<usize>]) {
        st.outs = map.iter().map(|q| q.and_then(|q| st.outs[q])).collect();
        reshape_flags(&mut st.waits, map);
        reshape_flags(&mut st.working, map);
        reshape_flags(&mut st.engaged, map);
        self.phase.reshape_regs(&mut st.regs, map);
    }

    fn out_registers(&self, st: &Self::State, out: &mut Vec<Option<Label>>) {
        out.extend_from_slice(&st.outs);
    }

    fn node_output(&self, _st: &Self::State) -> Option<Label> {
        None
    }

    fn port_output(&self, st: &Self::State, port: usize) -> Option<Label> {
        st.outs[port]
    }

    fn potential(&self) -> PotentialSpec {
        self.potential.clone()
    }
}
