use graph_core::{clone_graph, CloneMap, Configuration, Graph, Kind, Label};
use lcl_core::{LclSpec, PotentialSpec};
use pps::RngStream;

use engine::{CorruptMask, Params, Protocol, RoundCtx};

use crate::node::{corrupt_state, fresh_state, node_round, random_msg, reshape_flags, NodeMsg, NodeState};
use crate::phase::NodePhase;
use crate::TransformError;

/// The clones hosted by one node, and the messages they sent each other in
/// the previous round.
#[derive(Debug, Clone, PartialEq)]
pub struct CloneState<R, P> {
    pub clones: Vec<NodeState<R>>,
    /// `clique[i]` is the clique part of clone `i`'s inbox.
    pub clique: Vec<Vec<NodeMsg<P>>>,
}

/// Runs the node transformer of a phase procedure on the clone graph
/// G_α, every node of G hosting its α clones. The host output is the
/// index (1-based) of the clone that is IN, or α+1 when all clones are OUT.
#[derive(Debug, Clone)]
pub struct CloneHost<Ph> {
    name: String,
    phase: Ph,
    inner: LclSpec,
    host: LclSpec,
    potential: PotentialSpec,
    nu: usize,
    alpha: usize,
}

impl<Ph: NodePhase> CloneHost<Ph> {
    /// `inner` is the node-LCL solved on the clone graph (MIS), `host` the
    /// LCL the mapped outputs satisfy.
    pub fn new(
        name: impl Into<String>,
        phase: Ph,
        inner: LclSpec,
        host: LclSpec,
        potential: PotentialSpec,
        nu: usize,
        alpha: usize,
    ) -> Result<Self, TransformError> {
        if phase.phi() < 2 {
            return Err(TransformError::InvalidPhaseStructure(format!("phase length {} < 2", phase.phi())));
        }
        if alpha == 0 || inner.kind() != Kind::Node || host.kind() != Kind::Node {
            return Err(TransformError::InvalidPhaseStructure("clone simulation needs α ≥ 1 and node-LCLs".into()));
        }
        Ok(CloneHost { name: name.into(), phase, inner, host, potential, nu, alpha })
    }

    pub fn alpha(&self) -> usize {
        self.alpha
    }

    pub fn phase(&self) -> &Ph {
        &self.phase
    }

    /// Port of clone `from` leading to its sibling `to`.
    fn clique_port(from: usize, to: usize) -> usize {
        if to < from {
            to
        } else {
            to - 1
        }
    }

    fn map_output(&self, outs: impl Iterator<Item = Option<Label>>) -> Option<Label> {
        let mut first_in = None;
        for (i, o) in outs.enumerate() {
            match o {
                None => return None,
                Some(lcl_core::IN) if first_in.is_none() => first_in = Some(i),
                _ => {}
            }
        }
        Some(Label(first_in.map_or(self.alpha + 1, |i| i + 1) as u16))
    }
}

impl<Ph: NodePhase> Protocol for CloneHost<Ph> {
    type State = CloneState<Ph::Regs, Ph::Payload>;
    /// One message per layer.
    type Msg = Vec<NodeMsg<Ph::Payload>>;

    fn name(&self) -> &str {
        &self.name
    }

    fn kind(&self) -> Kind {
        Kind::Node
    }

    fn lcl(&self) -> &LclSpec {
        &self.host
    }

    fn params(&self) -> Params {
        let phi = self.phase.phi() as usize;
        Params { nu: self.nu, phi, locality_radius: self.nu + phi + 1, strong_offset: self.nu + phi + 2 }
    }

    fn initial_state(&self, degree: usize) -> Self::State {
        let a = self.alpha;
        CloneState {
            clones: (0..a).map(|_| fresh_state(&self.phase, a - 1 + degree)).collect(),
            clique: vec![vec![NodeMsg::idle(); a - 1]; a],
        }
    }

    fn idle_message(&self) -> Self::Msg {
        vec![NodeMsg::idle(); self.alpha]
    }

    fn random_message(&self, delta: usize, rng: &mut RngStream) -> Self::Msg {
        let d = delta + self.alpha - 1;
        (0..self.alpha).map(|_| random_msg(&self.phase, self.inner.alphabet(), d, rng)).collect()
    }

    fn step(&self, ctx: &mut RoundCtx<'_>, st: &mut Self::State, inbox: &[Self::Msg], outbox: &mut [Self::Msg]) {
        let a = self.alpha;
        let degree = inbox.len();
        let vdelta = ctx.delta() + a - 1;
        let mut clique_out = vec![vec![NodeMsg::idle(); a - 1]; a];
        for i in 0..a {
            let mut vin: Vec<NodeMsg<Ph::Payload>> = st.clique[i].clone();
            vin.extend(inbox.iter().map(|m| m[i].clone()));
            let mut vout = vec![NodeMsg::idle(); a - 1 + degree];
            let mut sub = ctx.sub(i, a - 1 + degree, vdelta, i);
            node_round(&self.phase, &self.inner, &mut sub, &mut st.clones[i], &vin, &mut vout);
            for (p, m) in vout.into_iter().enumerate() {
                if p < a - 1 {
                    let to = if p < i { p } else { p + 1 };
                    clique_out[to][Self::clique_port(to, i)] = m;
                } else {
                    outbox[p - (a - 1)][i] = m;
                }
            }
        }
        st.clique = clique_out;
    }

    fn corrupt(&self, st: &mut Self::State, mask: CorruptMask, degree: usize, delta: usize, rng: &mut RngStream) {
        let a = self.alpha;
        let vdelta = delta + a - 1;
        for c in st.clones.iter_mut() {
            corrupt_state(&self.phase, self.inner.alphabet(), c, mask, a - 1 + degree, vdelta, rng);
        }
        if mask.inbox {
            for row in st.clique.iter_mut() {
                for m in row.iter_mut() {
                    *m = random_msg(&self.phase, self.inner.alphabet(), vdelta, rng);
                }
            }
        }
    }

    fn reshape(&self, st: &mut Self::State, map: &[Option<usize>]) {
        let a = self.alpha;
        let vmap: Vec<Option<usize>> = (0..a - 1).map(Some).chain(map.iter().map(|q| q.map(|q| q + a - 1))).collect();
        for c in st.clones.iter_mut() {
            reshape_flags(&mut c.engaged, &vmap);
        }
    }

    fn out_registers(&self, st: &Self::State, out: &mut Vec<Option<Label>>) {
        out.extend(st.clones.iter().map(|c| c.out));
    }

    fn node_output(&self, st: &Self::State) -> Option<Label> {
        self.map_output(st.clones.iter().map(|c| c.out))
    }

    fn port_output(&self, _st: &Self::State, _port: usize) -> Option<Label> {
        None
    }

    fn view_graph(&self, host: &Graph) -> Option<Graph> {
        Some(clone_graph(host, self.alpha).0)
    }

    fn view_config(&self, host: &Graph, _view: &Graph, states: &[Self::State]) -> Option<Configuration> {
        let map = CloneMap { slots: host.slots(), alpha: self.alpha };
        let mut values = vec![None; host.slots() * self.alpha];
        for v in host.nodes() {
            for i in 0..self.alpha {
                values[map.handle(v, i)] = states[v].clones[i].out;
            }
        }
        Some(Configuration::node(values))
    }

    fn view_lcl(&self) -> &LclSpec {
        &self.inner
    }

    fn potential(&self) -> PotentialSpec {
        self.potential.clone()
    }
}
