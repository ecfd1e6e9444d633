use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use graph_core::{Configuration, Graph, Kind, Label, NodeId};
use pps::{RngStream, StreamKey, Tag};
use serde::Serialize;

use crate::protocol::{Cause, CorruptMask, Protocol, RoundCtx, Write};
use crate::{ActionKind, AdversaryAction, EngineError};

type KeyFn = Arc<dyn Fn(NodeId) -> StreamKey + Send + Sync>;

/// A register change the writer did not account for, or accounted for
/// wrongly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WriteViolation {
    pub round: u64,
    pub node: NodeId,
    pub reg: usize,
    pub before: Option<Label>,
    pub after: Option<Label>,
    pub record: Option<Write>,
}

/// Graph, per-node state and in-flight messages of one run.
#[derive(Clone)]
pub struct Network<P: Protocol> {
    proto: P,
    graph: Graph,
    states: Vec<P::State>,
    inbox: Vec<Vec<P::Msg>>,
    outbox: Vec<Vec<P::Msg>>,
    banks: Vec<Vec<(StreamKey, Tag, RngStream)>>,
    shared: HashMap<(StreamKey, Tag), RngStream>,
    keys: Option<KeyFn>,
    master: u64,
    round: u64,
    forced: bool,
    log: Vec<Write>,
    before: Vec<Option<Label>>,
    after: Vec<Option<Label>>,
    violations: Vec<WriteViolation>,
    pending: Vec<AdversaryAction>,
    manipulated: BTreeSet<NodeId>,
    fault_rounds: Option<(u64, u64)>,
    view: Option<Graph>,
    view_stale: bool,
}

impl<P: Protocol> Network<P> {
    /// Every node starts in `initial_state` with idle messages in flight.
    pub fn new(proto: P, graph: Graph, master: u64) -> Self {
        let n = graph.slots();
        let states = (0..n).map(|v| proto.initial_state(graph.degree(v))).collect();
        let inbox: Vec<Vec<P::Msg>> = (0..n).map(|v| vec![proto.idle_message(); graph.degree(v)]).collect();
        let outbox = inbox.clone();
        Network {
            proto,
            graph,
            states,
            inbox,
            outbox,
            banks: vec![Vec::new(); n],
            shared: HashMap::new(),
            keys: None,
            master,
            round: 0,
            forced: false,
            log: Vec::new(),
            before: Vec::new(),
            after: Vec::new(),
            violations: Vec::new(),
            pending: Vec::new(),
            manipulated: BTreeSet::new(),
            fault_rounds: None,
            view: None,
            view_stale: true,
        }
    }

    /// Overrides the owner key of each node's streams (default
    /// `StreamKey::Node(v)`), e.g. to give clone-graph nodes the keys their
    /// host simulation would use.
    pub fn with_keys(mut self, f: impl Fn(NodeId) -> StreamKey + Send + Sync + 'static) -> Self {
        self.keys = Some(Arc::new(f));
        self
    }

    pub fn with_forced_sync(mut self, forced: bool) -> Self {
        self.forced = forced;
        self
    }

    pub fn protocol(&self) -> &P {
        &self.proto
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn master_seed(&self) -> u64 {
        self.master
    }

    pub fn round(&self) -> u64 {
        self.round
    }

    pub fn states(&self) -> &[P::State] {
        &self.states
    }

    pub fn state(&self, v: NodeId) -> &P::State {
        &self.states[v]
    }

    pub fn state_mut(&mut self, v: NodeId) -> &mut P::State {
        &mut self.states[v]
    }

    pub fn inbox(&self, v: NodeId) -> &[P::Msg] {
        &self.inbox[v]
    }

    pub fn inbox_mut(&mut self, v: NodeId) -> &mut [P::Msg] {
        &mut self.inbox[v]
    }

    pub fn write_violations(&self) -> &[WriteViolation] {
        &self.violations
    }

    /// Union of the manipulated sets of all applied actions.
    pub fn manipulated(&self) -> &BTreeSet<NodeId> {
        &self.manipulated
    }

    /// `(t*_a, t*_b)`: rounds of the first and last applied action.
    pub fn fault_rounds(&self) -> Option<(u64, u64)> {
        self.fault_rounds
    }

    pub fn has_pending_actions(&self) -> bool {
        !self.pending.is_empty()
    }

    fn key(&self, v: NodeId) -> StreamKey {
        match &self.keys {
            Some(f) => f(v),
            None => StreamKey::Node(v),
        }
    }

    /// Host-level configuration. Edge values are defined only on
    /// port-consistent edges; an inconsistent edge reads as ⊥.
    pub fn host_config(&self) -> Configuration {
        match self.proto.kind() {
            Kind::Node => Configuration::node(
                (0..self.graph.slots())
                    .map(|v| if self.graph.is_alive(v) { self.proto.node_output(&self.states[v]) } else { None })
                    .collect(),
            ),
            Kind::Edge => Configuration::edge(
                self.graph
                    .edges()
                    .iter()
                    .map(|e| {
                        let (a, b) = e.endpoints();
                        let pa = self.graph.port_to(a, b).expect("edge");
                        let pb = self.graph.port_to(b, a).expect("edge");
                        let x = self.proto.port_output(&self.states[a], pa);
                        if x == self.proto.port_output(&self.states[b], pb) {
                            x
                        } else {
                            None
                        }
                    })
                    .collect(),
            ),
        }
    }

    /// Whether every edge has equal output registers at both ends.
    pub fn port_consistent(&self) -> bool {
        self.graph.edges().iter().all(|e| {
            let (a, b) = e.endpoints();
            let pa = self.graph.port_to(a, b).expect("edge");
            let pb = self.graph.port_to(b, a).expect("edge");
            self.proto.port_output(&self.states[a], pa) == self.proto.port_output(&self.states[b], pb)
        })
    }

    /// Graph of the virtual level, or the host graph.
    pub fn view_graph(&mut self) -> &Graph {
        if self.view_stale {
            self.view = self.proto.view_graph(&self.graph);
            self.view_stale = false;
        }
        self.view.as_ref().unwrap_or(&self.graph)
    }

    /// Configuration of the virtual level, or the host configuration.
    pub fn view_config(&mut self) -> Configuration {
        self.view_graph();
        match &self.view {
            Some(view) => self.proto.view_config(&self.graph, view, &self.states).expect("view config"),
            None => self.host_config(),
        }
    }

    /// One synchronous round: every live node computes and sends, then all
    /// messages are delivered. Adversary actions due at the new round are
    /// applied afterwards.
    pub fn run_round(&mut self) -> Result<(), EngineError> {
        let delta = self.graph.delta();
        for v in 0..self.graph.slots() {
            if !self.graph.is_alive(v) {
                continue;
            }
            self.before.clear();
            self.proto.out_registers(&self.states[v], &mut self.before);
            self.log.clear();
            let key = self.key(v);
            let mut ctx = RoundCtx {
                degree: self.graph.degree(v),
                delta,
                master: self.master,
                key,
                me: v,
                neighbors: self.graph.neighbors(v),
                bank: &mut self.banks[v],
                shared: &mut self.shared,
                forced: self.forced,
                log: &mut self.log,
                reg_offset: 0,
            };
            self.proto.step(&mut ctx, &mut self.states[v], &self.inbox[v], &mut self.outbox[v]);
            self.after.clear();
            self.proto.out_registers(&self.states[v], &mut self.after);
            self.check_writes(v);
        }
        for v in 0..self.graph.slots() {
            for p in 0..self.graph.degree(v) {
                let u = self.graph.neighbor(v, p);
                let q = self.graph.reverse_port(v, p);
                self.inbox[u][q] = self.outbox[v][p].clone();
            }
        }
        self.round += 1;
        self.apply_due()
    }

    fn check_writes(&mut self, v: NodeId) {
        for reg in 0..self.before.len().min(self.after.len()) {
            let (b, a) = (self.before[reg], self.after[reg]);
            let record = self.log.iter().rev().find(|w| w.reg == reg).copied();
            let ok = match record {
                _ if a == b => true,
                Some(w) => match w.cause {
                    Cause::Decision => a.is_some() && w.step == pps::Step::At(w.phi - 1),
                    Cause::Reset => a.is_none(),
                },
                None => false,
            };
            if !ok {
                self.violations.push(WriteViolation { round: self.round, node: v, reg, before: b, after: a, record });
            }
        }
    }

    /// Queues actions; those due at the current round apply immediately.
    pub fn schedule(&mut self, actions: impl IntoIterator<Item = AdversaryAction>) -> Result<(), EngineError> {
        for a in actions {
            if a.round < self.round {
                return Err(EngineError::InvalidSchedule(format!("action at round {} is in the past", a.round)));
            }
            self.pending.push(a);
        }
        self.pending.sort_by_key(|a| a.round);
        self.apply_due()
    }

    fn apply_due(&mut self) -> Result<(), EngineError> {
        while self.pending.first().is_some_and(|a| a.round == self.round) {
            let a = self.pending.remove(0);
            self.apply(&a.kind)?;
            let t = self.round;
            self.fault_rounds = Some(self.fault_rounds.map_or((t, t), |(first, _)| (first, t)));
        }
        Ok(())
    }

    fn adversary_rng(&self, v: NodeId) -> RngStream {
        RngStream::derive(self.master ^ self.round.wrapping_mul(0x9e37_79b9), StreamKey::Node(v), Tag::Adversary)
    }

    /// Applies one action at once and records its manipulated nodes.
    pub fn apply(&mut self, kind: &ActionKind) -> Result<(), EngineError> {
        let delta = self.graph.delta();
        match kind {
            ActionKind::CorruptRegisters { nodes, mask } => {
                for &v in nodes {
                    if !self.graph.is_alive(v) {
                        return Err(graph_core::GraphError::UnknownNode(v).into());
                    }
                    self.corrupt_node(v, *mask);
                    self.manipulated.insert(v);
                }
            }
            ActionKind::RewirePorts { node, perm } => {
                let v = *node;
                self.graph.permute_ports(v, perm)?;
                let map: Vec<Option<usize>> = perm.iter().map(|&q| Some(q)).collect();
                self.proto.reshape(&mut self.states[v], &map);
                let old = std::mem::take(&mut self.inbox[v]);
                self.inbox[v] = perm.iter().map(|&q| old[q].clone()).collect();
                self.outbox[v] = vec![self.proto.idle_message(); perm.len()];
                self.manipulated.insert(v);
                self.view_stale = true;
            }
            ActionKind::AddNode { neighbors } => {
                for &u in neighbors {
                    if !self.graph.is_alive(u) {
                        return Err(graph_core::GraphError::UnknownNode(u).into());
                    }
                    if self.graph.degree(u) + 1 > delta {
                        return Err(graph_core::GraphError::DegreeBoundViolated {
                            node: u,
                            degree: self.graph.degree(u) + 1,
                            delta,
                        }
                        .into());
                    }
                }
                if neighbors.len() > delta {
                    return Err(graph_core::GraphError::DegreeBoundViolated {
                        node: self.graph.slots(),
                        degree: neighbors.len(),
                        delta,
                    }
                    .into());
                }
                let v = self.graph.add_node();
                self.states.push(self.proto.initial_state(0));
                self.inbox.push(Vec::new());
                self.outbox.push(Vec::new());
                self.banks.push(Vec::new());
                for &u in neighbors {
                    self.link(v, u)?;
                }
                self.corrupt_node(v, CorruptMask::ALL);
                self.manipulated.insert(v);
                self.manipulated.extend(neighbors.iter().copied());
            }
            ActionKind::RemoveNode { node } => {
                let v = *node;
                let nbrs = self.graph.neighbors(v).to_vec();
                let maps: Vec<Vec<Option<usize>>> = nbrs
                    .iter()
                    .map(|&u| (0..self.graph.degree(u)).filter(|&p| self.graph.neighbor(u, p) != v).map(Some).collect())
                    .collect();
                self.graph.remove_node(v)?;
                self.inbox[v].clear();
                self.outbox[v].clear();
                for (&u, map) in nbrs.iter().zip(&maps) {
                    self.remap(u, map);
                }
                self.manipulated.remove(&v);
                self.manipulated.extend(nbrs);
            }
            ActionKind::AddEdge { u, v } => {
                self.link(*u, *v)?;
                self.manipulated.extend([*u, *v]);
            }
            ActionKind::RemoveEdge { u, v } => {
                let (u, v) = (*u, *v);
                if !self.graph.has_edge(u, v) {
                    return Err(graph_core::GraphError::UnknownEdge(u, v).into());
                }
                let keep = |g: &Graph, a: NodeId, b: NodeId| -> Vec<Option<usize>> {
                    (0..g.degree(a)).filter(|&p| g.neighbor(a, p) != b).map(Some).collect()
                };
                let (mu, mv) = (keep(&self.graph, u, v), keep(&self.graph, v, u));
                self.graph.remove_edge(u, v)?;
                self.remap(u, &mu);
                self.remap(v, &mv);
                self.manipulated.extend([u, v]);
            }
        }
        self.view_stale = true;
        Ok(())
    }

    fn link(&mut self, u: NodeId, v: NodeId) -> Result<(), EngineError> {
        self.graph.add_edge(u, v)?;
        for w in [u, v] {
            let d = self.graph.degree(w);
            let map: Vec<Option<usize>> = (0..d).map(|p| if p + 1 < d { Some(p) } else { None }).collect();
            self.remap(w, &map);
        }
        Ok(())
    }

    /// Applies a new→old port map to the state and both message buffers.
    fn remap(&mut self, v: NodeId, map: &[Option<usize>]) {
        self.proto.reshape(&mut self.states[v], map);
        let idle = self.proto.idle_message();
        let old = std::mem::take(&mut self.inbox[v]);
        self.inbox[v] = map.iter().map(|q| q.map_or_else(|| idle.clone(), |q| old[q].clone())).collect();
        self.outbox[v] = vec![idle; map.len()];
    }

    fn corrupt_node(&mut self, v: NodeId, mask: CorruptMask) {
        let mut rng = self.adversary_rng(v);
        let d = self.graph.degree(v);
        let delta = self.graph.delta();
        self.proto.corrupt(&mut self.states[v], mask, d, delta, &mut rng);
        if mask.inbox {
            for m in self.inbox[v].iter_mut() {
                *m = self.proto.random_message(delta, &mut rng);
            }
        }
    }

    /// Corrupts every register of every live node and every message in
    /// flight, without counting the nodes as manipulated.
    pub fn randomize_all(&mut self) {
        for v in 0..self.graph.slots() {
            if self.graph.is_alive(v) {
                self.corrupt_node(v, CorruptMask::ALL);
            }
        }
    }
}
