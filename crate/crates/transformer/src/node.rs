use graph_core::{Kind, Label, Multiset};
use lcl_core::{LclSpec, PotentialSpec};
use pps::{PpsState, RngStream, Step, Tag};
use serde::Serialize;

use engine::{Cause, CorruptMask, Params, Protocol, RoundCtx};

use crate::phase::{random_label, NodePhase, PhaseField, WorkView};
use crate::TransformError;

/// Registers of one node under the node transformer.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeState<R> {
    pub out: Option<Label>,
    pub wait: bool,
    pub pps: PpsState,
    /// `S_v`, as a flag per port.
    pub engaged: Vec<bool>,
    pub regs: R,
}

/// The `{detect, phase, pps}` message sent on every port every round.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NodeMsg<P> {
    pub detect: Option<Label>,
    pub phase: PhaseField<P>,
    pub pps: Step,
}

impl<P> NodeMsg<P> {
    pub fn idle() -> Self {
        NodeMsg { detect: None, phase: PhaseField::Nil, pps: Step::Hold }
    }
}

pub(crate) fn fresh_state<Ph: NodePhase>(ph: &Ph, degree: usize) -> NodeState<Ph::Regs> {
    NodeState { out: None, wait: false, pps: PpsState::hold(ph.phi()), engaged: vec![false; degree], regs: ph.fresh_regs() }
}

pub(crate) fn random_msg<Ph: NodePhase>(ph: &Ph, alphabet: usize, delta: usize, rng: &mut RngStream) -> NodeMsg<Ph::Payload> {
    let phase = match rng.below(3) {
        0 => PhaseField::Nil,
        1 => PhaseField::Announce(random_label(alphabet, rng)),
        _ => PhaseField::Work(ph.random_payload(delta, rng)),
    };
    let detect = random_label(alphabet, rng);
    let pps = PpsState::random(ph.phi(), rng).step();
    NodeMsg { detect, phase, pps }
}

pub(crate) fn corrupt_state<Ph: NodePhase>(
    ph: &Ph,
    alphabet: usize,
    st: &mut NodeState<Ph::Regs>,
    mask: CorruptMask,
    degree: usize,
    delta: usize,
    rng: &mut RngStream,
) {
    if mask.out {
        st.out = random_label(alphabet, rng);
    }
    if mask.step {
        st.pps = PpsState::random(ph.phi(), rng);
    }
    if mask.wait {
        st.wait = rng.coin();
    }
    if mask.phase {
        st.engaged = (0..degree).map(|_| rng.coin()).collect();
        st.regs = ph.random_regs(delta, rng);
    }
}

pub(crate) fn reshape_flags(flags: &mut Vec<bool>, map: &[Option<usize>]) {
    let new = map.iter().map(|q| q.is_some_and(|q| flags.get(q).copied().unwrap_or(false))).collect();
    *flags = new;
}

/// One round of the node transformer at one node.
pub(crate) fn node_round<Ph: NodePhase>(
    ph: &Ph,
    lcl: &LclSpec,
    ctx: &mut RoundCtx<'_>,
    st: &mut NodeState<Ph::Regs>,
    inbox: &[NodeMsg<Ph::Payload>],
    outbox: &mut [NodeMsg<Ph::Payload>],
) {
    let phi = ph.phi();
    let step = st.pps.step();
    let alphabet = lcl.alphabet();
    for m in outbox.iter_mut() {
        m.phase = PhaseField::Nil;
    }
    if step.is_hold() {
        st.wait = false;
    }
    if let Some(o) = st.out {
        let m = Multiset::from_labels(alphabet, inbox.iter().filter_map(|m| m.detect));
        if lcl.holds(o, &m) {
            announce(outbox, Some(o));
        } else {
            st.out = None;
            st.wait = true;
            ctx.log(0, Cause::Reset, step, phi);
        }
    } else if !st.wait {
        match step {
            Step::Hold => {}
            Step::At(0) => {
                st.regs = ph.fresh_regs();
                announce(outbox, None);
            }
            Step::At(j) => {
                if j == 1 {
                    st.engaged = inbox.iter().map(|m| m.pps == Step::At(0) && m.phase == PhaseField::Announce(None)).collect();
                }
                st.engaged.resize(inbox.len(), false);
                let received: Vec<Ph::Payload> = inbox
                    .iter()
                    .zip(&st.engaged)
                    .filter(|(_, &e)| e)
                    .filter_map(|(m, _)| match &m.phase {
                        PhaseField::Work(p) => Some(p.clone()),
                        _ => None,
                    })
                    .collect();
                let view = WorkView { delta: ctx.delta(), engaged: st.engaged.iter().filter(|&&e| e).count(), received: &received };
                if j + 1 == phi {
                    let verdict = ph.decide(&view, &st.regs);
                    let decided = Multiset::from_labels(
                        alphabet,
                        inbox.iter().filter_map(|m| match m.phase {
                            PhaseField::Announce(l) => l,
                            _ => None,
                        }),
                    );
                    if let Some(o) = ph.resolve(&verdict, &decided) {
                        st.out = Some(o);
                        ctx.log(0, Cause::Decision, step, phi);
                        announce(outbox, Some(o));
                    }
                } else if let Some(p) = ph.work(j, &view, &mut st.regs, ctx.rng(Tag::Phase)) {
                    for (m, _) in outbox.iter_mut().zip(&st.engaged).filter(|(_, &e)| e) {
                        m.phase = PhaseField::Work(p.clone());
                    }
                }
            }
        }
    }
    for m in outbox.iter_mut() {
        m.detect = st.out;
        m.pps = step;
    }
    let exit = step.is_hold() && (ctx.forced_sync() || ctx.rng(Tag::Pps).coin());
    st.pps = st.pps.advance_with(exit);
}

fn announce<P>(outbox: &mut [NodeMsg<P>], out: Option<Label>) {
    for m in outbox {
        m.phase = PhaseField::Announce(out);
    }
}

/// Self-stabilizing algorithm for a node-LCL built from a fault-free phase
/// procedure. Detection broadcasts the output register and checks the
/// predicate against the neighbors' broadcasts.
#[derive(Debug, Clone)]
pub struct NodeTransformer<Ph> {
    name: String,
    phase: Ph,
    lcl: LclSpec,
    potential: PotentialSpec,
    nu: usize,
}

impl<Ph: NodePhase> NodeTransformer<Ph> {
    pub fn new(name: impl Into<String>, phase: Ph, lcl: LclSpec, potential: PotentialSpec, nu: usize) -> Result<Self, TransformError> {
        if phase.phi() < 2 {
            return Err(TransformError::InvalidPhaseStructure(format!("phase length {} < 2", phase.phi())));
        }
        if lcl.kind() != Kind::Node {
            return Err(TransformError::InvalidPhaseStructure("node transformer needs a node-LCL".into()));
        }
        Ok(NodeTransformer { name: name.into(), phase, lcl, potential, nu })
    }

    pub fn phase(&self) -> &Ph {
        &self.phase
    }
}

impl<Ph: NodePhase> Protocol for NodeTransformer<Ph> {
    type State = NodeState<Ph::Regs>;
    type Msg = NodeMsg<Ph::Payload>;

    fn name(&self) -> &str {
        &self.name
    }

    fn kind(&self) -> Kind {
        Kind::Node
    }

    fn lcl(&self) -> &LclSpec {
        &self.lcl
    }

    fn params(&self) -> Params {
        let phi = self.phase.phi() as usize;
        Params { nu: self.nu, phi, locality_radius: self.nu + phi + 1, strong_offset: self.nu + phi + 2 }
    }

    fn initial_state(&self, degree: usize) -> Self::State {
        fresh_state(&self.phase, degree)
    }

    fn idle_message(&self) -> Self::Msg {
        NodeMsg::idle()
    }

    fn random_message(&self, delta: usize, rng: &mut RngStream) -> Self::Msg {
        random_msg(&self.phase, self.lcl.alphabet(), delta, rng)
    }

    fn step(&self, ctx: &mut RoundCtx<'_>, state: &mut Self::State, inbox: &[Self::Msg], outbox: &mut [Self::Msg]) {
        node_round(&self.phase, &self.lcl, ctx, state, inbox, outbox);
    }

    fn corrupt(&self, state: &mut Self::State, mask: CorruptMask, degree: usize, delta: usize, rng: &mut RngStream) {
        corrupt_state(&self.phase, self.lcl.alphabet(), state, mask, degree, delta, rng);
    }

    fn reshape(&self, state: &mut Self::State, map: &[Option<usize>]) {
        reshape_flags(&mut state.engaged, map);
    }

    fn out_registers(&self, state: &Self::State, out: &mut Vec<Option<Label>>) {
        out.push(state.out);
    }

    fn node_output(&self, state: &Self::State) -> Option<Label> {
        state.out
    }

    fn port_output(&self, _state: &Self::State, _port: usize) -> Option<Label> {
        None
    }

    fn potential(&self) -> PotentialSpec {
        self.potential.clone()
    }
}
