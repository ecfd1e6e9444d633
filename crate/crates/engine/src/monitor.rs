use std::collections::BTreeMap;

use graph_core::{distances_from, Configuration, Distance, EdgeId, Graph, Kind, Label, NodeId};
use lcl_core::{is_strong, potential, LclSpec, PotentialSpec};
use serde::Serialize;

/// Checks, from a given round on, that every decided element is content and
/// that the potential never grows.
#[derive(Debug, Clone)]
pub struct InvariantMonitor {
    from: u64,
    lcl: LclSpec,
    potential: PotentialSpec,
    last: Option<u64>,
    pub report: InvariantReport,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub rounds_checked: u64,
    pub strong_violations: u64,
    pub potential_increases: u64,
    /// First round with a violation of either kind.
    pub first_violation: Option<u64>,
}

impl InvariantReport {
    pub fn clean(&self) -> bool {
        self.strong_violations == 0 && self.potential_increases == 0
    }
}

impl InvariantMonitor {
    pub fn new(from: u64, lcl: LclSpec, potential: PotentialSpec) -> Self {
        InvariantMonitor { from, lcl, potential, last: None, report: InvariantReport::default() }
    }

    pub fn observe(&mut self, round: u64, g: &Graph, c: &Configuration) {
        if round < self.from {
            return;
        }
        self.report.rounds_checked += 1;
        let mut bad = false;
        if !is_strong(&self.lcl, g, c) {
            self.report.strong_violations += 1;
            bad = true;
        }
        let p = potential(&self.potential, g, c).expect("potential kind matches");
        if self.last.is_some_and(|q| p > q) {
            self.report.potential_increases += 1;
            bad = true;
        }
        self.last = Some(p);
        if bad && self.report.first_violation.is_none() {
            self.report.first_violation = Some(round);
        }
    }
}

/// Element of a configuration that survives re-indexing of edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Elem {
    Node(NodeId),
    Edge(EdgeId),
}

/// Counts output changes of elements at distance at least `radius` from
/// every manipulated node, relative to a baseline configuration. An edge is
/// as far as its nearer endpoint.
#[derive(Debug, Clone)]
pub struct LocalityMonitor {
    radius: usize,
    far: BTreeMap<Elem, Option<Label>>,
    pub violations: Vec<(u64, String)>,
}

impl LocalityMonitor {
    pub fn new(g: &Graph, baseline: &Configuration, manipulated: &[NodeId], radius: usize) -> Self {
        let dist = distances_from(g, manipulated);
        let far_from = |v: NodeId| dist[v].at_least(radius);
        let mut far = BTreeMap::new();
        match baseline.kind() {
            Kind::Node => {
                for v in g.nodes().filter(|&v| far_from(v)) {
                    far.insert(Elem::Node(v), baseline.get(v));
                }
            }
            Kind::Edge => {
                for (i, e) in g.edges().iter().enumerate() {
                    let (a, b) = e.endpoints();
                    if far_from(a) && far_from(b) {
                        far.insert(Elem::Edge(*e), baseline.get(i));
                    }
                }
            }
        }
        LocalityMonitor { radius, far, violations: Vec::new() }
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Number of elements under watch.
    pub fn watched(&self) -> usize {
        self.far.len()
    }

    pub fn observe(&mut self, round: u64, g: &Graph, c: &Configuration) {
        for (elem, before) in &self.far {
            let now = match *elem {
                Elem::Node(v) => g.is_alive(v).then(|| c.get(v)).flatten(),
                Elem::Edge(e) => g.edge_index(e).and_then(|i| c.get(i)),
            };
            if now != *before {
                self.violations.push((round, format!("{elem:?}: {before:?} -> {now:?}")));
            }
        }
    }
}

/// Distance of every element of `g` (nodes or edges) from `sources`.
pub fn element_distances(g: &Graph, kind: Kind, sources: &[NodeId]) -> Vec<Distance> {
    let dist = distances_from(g, sources);
    match kind {
        Kind::Node => dist,
        Kind::Edge => g
            .edges()
            .iter()
            .map(|e| {
                let (a, b) = e.endpoints();
                dist[a].min(dist[b])
            })
            .collect(),
    }
}
