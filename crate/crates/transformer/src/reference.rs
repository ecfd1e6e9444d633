use std::collections::HashMap;

use graph_core::{Configuration, Graph, Kind, Label, Multiset, NodeId};
use lcl_core::LclSpec;
use pps::{RngStream, StreamKey, Tag};

use crate::phase::{EdgePhase, EdgeView, NodePhase, WorkView};

/// Fault-free, perfectly synchronized execution of phase procedures: every
/// undecided element takes part in every phase. Streams persist across
/// phases, keyed like the transformed run.
#[derive(Debug, Clone)]
pub struct PhaseRunner {
    master: u64,
    bank: HashMap<StreamKey, RngStream>,
    /// Decisions on which the two endpoints of an edge disagreed.
    pub asymmetric: usize,
}

impl PhaseRunner {
    pub fn new(master: u64) -> Self {
        PhaseRunner { master, bank: HashMap::new(), asymmetric: 0 }
    }

    fn rng(&mut self, key: StreamKey) -> &mut RngStream {
        let master = self.master;
        self.bank.entry(key).or_insert_with(|| RngStream::derive(master, key, Tag::Phase))
    }

    /// One phase of a node procedure from configuration `c`.
    pub fn node_phase<Ph: NodePhase>(
        &mut self,
        ph: &Ph,
        lcl: &LclSpec,
        g: &Graph,
        c: &Configuration,
        key: impl Fn(NodeId) -> StreamKey,
    ) -> Configuration {
        let undecided: Vec<bool> = (0..g.slots()).map(|v| g.is_alive(v) && c.get(v).is_none()).collect();
        let mut regs: Vec<Option<Ph::Regs>> = undecided.iter().map(|&u| u.then(|| ph.fresh_regs())).collect();
        let mut sent: Vec<Option<Ph::Payload>> = vec![None; g.slots()];
        let gather = |v: NodeId, sent: &[Option<Ph::Payload>]| -> (usize, Vec<Ph::Payload>) {
            let engaged: Vec<NodeId> = g.neighbors(v).iter().copied().filter(|&u| undecided[u]).collect();
            let received = engaged.iter().filter_map(|&u| sent[u].clone()).collect();
            (engaged.len(), received)
        };
        for j in 1..ph.phi() - 1 {
            let mut next = vec![None; g.slots()];
            for v in g.nodes().filter(|&v| undecided[v]) {
                let (engaged, received) = gather(v, &sent);
                let view = WorkView { delta: g.delta(), engaged, received: &received };
                let r = regs[v].as_mut().expect("undecided node has registers");
                next[v] = ph.work(j, &view, r, self.rng(key(v)));
            }
            sent = next;
        }
        let mut out = c.clone();
        for v in g.nodes().filter(|&v| undecided[v]) {
            let (engaged, received) = gather(v, &sent);
            let view = WorkView { delta: g.delta(), engaged, received: &received };
            let verdict = ph.decide(&view, regs[v].as_ref().expect("registers"));
            let decided = Multiset::from_labels(lcl.alphabet(), g.neighbors(v).iter().filter_map(|&u| c.get(u)));
            out.set(v, ph.resolve(&verdict, &decided));
        }
        out
    }

    /// One phase of an edge procedure from configuration `c`.
    pub fn edge_phase<Ph: EdgePhase>(&mut self, ph: &Ph, g: &Graph, c: &Configuration, key: impl Fn(NodeId) -> StreamKey) -> Configuration {
        assert_eq!(c.kind(), Kind::Edge);
        let n = g.slots();
        let outs: Vec<Vec<Option<Label>>> =
            (0..n).map(|v| if g.is_alive(v) { (0..g.degree(v)).map(|p| c.get(g.port_edge(v, p))).collect() } else { Vec::new() }).collect();
        let engaged: Vec<Vec<bool>> = outs.iter().map(|o| o.iter().map(Option::is_none).collect()).collect();
        let mut regs: Vec<Ph::Regs> = (0..n).map(|v| ph.fresh_regs(if g.is_alive(v) { g.degree(v) } else { 0 })).collect();
        let mut sent: Vec<Vec<Option<Ph::Payload>>> = outs.iter().map(|o| vec![None; o.len()]).collect();
        let mut decisions: Vec<Vec<Option<Label>>> = outs.iter().map(|o| vec![None; o.len()]).collect();
        for j in 1..ph.phi() {
            let mut next = sent.clone();
            for v in g.nodes() {
                let received: Vec<Option<Ph::Payload>> = (0..g.degree(v))
                    .map(|p| {
                        if !engaged[v][p] {
                            return None;
                        }
                        let u = g.neighbor(v, p);
                        sent[u][g.reverse_port(v, p)].clone()
                    })
                    .collect();
                let mut send = vec![None; g.degree(v)];
                let view = EdgeView { delta: g.delta(), engaged: &engaged[v], received: &received, outs: &outs[v] };
                let rng = self.rng(key(v));
                let dec = ph.step(j, &view, &mut regs[v], rng, &mut send);
                for (p, x) in send.iter_mut().enumerate() {
                    if !engaged[v][p] {
                        *x = None;
                    }
                }
                next[v] = send;
                if j + 1 == ph.phi() {
                    for (p, o) in dec {
                        if engaged[v][p] {
                            decisions[v][p] = Some(o);
                        }
                    }
                }
            }
            sent = next;
        }
        let mut out = c.clone();
        for (idx, e) in g.edges().iter().enumerate() {
            if c.get(idx).is_some() {
                continue;
            }
            let (a, b) = e.endpoints();
            let x = decisions[a][g.port_to(a, b).expect("edge")];
            let y = decisions[b][g.port_to(b, a).expect("edge")];
            if x == y {
                out.set(idx, x);
            } else {
                self.asymmetric += 1;
            }
        }
        out
    }
}
