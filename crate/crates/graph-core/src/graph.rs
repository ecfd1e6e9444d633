use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::GraphError;

pub type NodeId = usize;

/// An undirected edge, stored with the smaller handle first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeId {
    a: NodeId,
    b: NodeId,
}

impl EdgeId {
    pub fn new(u: NodeId, v: NodeId) -> Result<Self, GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        Ok(EdgeId { a: u.min(v), b: u.max(v) })
    }

    pub fn endpoints(&self) -> (NodeId, NodeId) {
        (self.a, self.b)
    }

    pub fn other(&self, v: NodeId) -> NodeId {
        if v == self.a {
            self.b
        } else {
            self.a
        }
    }

    pub fn touches(&self, v: NodeId) -> bool {
        self.a == v || self.b == v
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}}}", self.a, self.b)
    }
}

/// Hop distance; `Infinite` when the target set is empty or unreachable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Finite(usize),
    Infinite,
}

impl Distance {
    pub fn at_least(self, r: usize) -> bool {
        match self {
            Distance::Finite(d) => d >= r,
            Distance::Infinite => true,
        }
    }

    pub fn finite(self) -> Option<usize> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Infinite => None,
        }
    }
}

/// Undirected simple graph with per-node port numbering.
///
/// Port `p` of node `v` (0-based) leads to `neighbor(v, p)`. Port order is
/// insertion order. Removed nodes keep their slot but are marked dead, so
/// handles of surviving nodes never move.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<NodeId>>,
    alive: Vec<bool>,
    delta: usize,
    rev: Vec<Vec<usize>>,
    edges: Vec<EdgeId>,
    port_edge: Vec<Vec<usize>>,
}

impl Graph {
    /// `n` isolated nodes.
    pub fn empty(n: usize, delta: usize) -> Result<Self, GraphError> {
        if delta == 0 {
            return Err(GraphError::ZeroDegreeBound);
        }
        let mut g = Graph {
            adj: vec![Vec::new(); n],
            alive: vec![true; n],
            delta,
            rev: Vec::new(),
            edges: Vec::new(),
            port_edge: Vec::new(),
        };
        g.rebuild();
        Ok(g)
    }

    /// Builds a graph from an edge list. The node set is `0..=max handle`.
    pub fn from_edges(edges: &[(NodeId, NodeId)], delta: usize) -> Result<Self, GraphError> {
        let n = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
        Self::with_nodes(n, edges, delta)
    }

    /// Builds a graph on nodes `0..n` from an edge list.
    pub fn with_nodes(n: usize, edges: &[(NodeId, NodeId)], delta: usize) -> Result<Self, GraphError> {
        if delta == 0 {
            return Err(GraphError::ZeroDegreeBound);
        }
        let mut adj: Vec<Vec<NodeId>> = vec![Vec::new(); n];
        let mut seen = std::collections::HashSet::new();
        for &(u, v) in edges {
            if u >= n {
                return Err(GraphError::UnknownNode(u));
            }
            if v >= n {
                return Err(GraphError::UnknownNode(v));
            }
            let e = EdgeId::new(u, v)?;
            if !seen.insert(e) {
                return Err(GraphError::DuplicateEdge(e.a, e.b));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (node, ports) in adj.iter().enumerate() {
            if ports.len() > delta {
                return Err(GraphError::DegreeBoundViolated { node, degree: ports.len(), delta });
            }
        }
        let mut g = Graph {
            alive: vec![true; n],
            adj,
            delta,
            rev: Vec::new(),
            edges: Vec::new(),
            port_edge: Vec::new(),
        };
        g.rebuild();
        Ok(g)
    }

    /// Builds a graph from explicit port lists. Used by derived constructions
    /// that need control over port order.
    pub fn from_ports(adj: Vec<Vec<NodeId>>, delta: usize) -> Result<Self, GraphError> {
        if delta == 0 {
            return Err(GraphError::ZeroDegreeBound);
        }
        let n = adj.len();
        for (v, ports) in adj.iter().enumerate() {
            if ports.len() > delta {
                return Err(GraphError::DegreeBoundViolated { node: v, degree: ports.len(), delta });
            }
            for (i, &u) in ports.iter().enumerate() {
                if u >= n {
                    return Err(GraphError::UnknownNode(u));
                }
                if u == v {
                    return Err(GraphError::SelfLoop(v));
                }
                if ports[..i].contains(&u) {
                    return Err(GraphError::DuplicateEdge(v.min(u), v.max(u)));
                }
                if !adj[u].contains(&v) {
                    return Err(GraphError::UnknownEdge(u, v));
                }
            }
        }
        let mut g = Graph {
            alive: vec![true; n],
            adj,
            delta,
            rev: Vec::new(),
            edges: Vec::new(),
            port_edge: Vec::new(),
        };
        g.rebuild();
        Ok(g)
    }

    fn rebuild(&mut self) {
        let n = self.adj.len();
        self.rev = self
            .adj
            .iter()
            .enumerate()
            .map(|(v, ports)| {
                ports
                    .iter()
                    .map(|&u| self.adj[u].iter().position(|&w| w == v).expect("asymmetric adjacency"))
                    .collect()
            })
            .collect();
        let mut edges = Vec::new();
        for v in 0..n {
            for &u in &self.adj[v] {
                if v < u {
                    edges.push(EdgeId { a: v, b: u });
                }
            }
        }
        edges.sort_unstable();
        self.port_edge = (0..n)
            .map(|v| {
                self.adj[v]
                    .iter()
                    .map(|&u| {
                        let e = EdgeId { a: v.min(u), b: v.max(u) };
                        edges.binary_search(&e).expect("edge index")
                    })
                    .collect()
            })
            .collect();
        self.edges = edges;
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    /// Number of node slots, dead ones included.
    pub fn slots(&self) -> usize {
        self.adj.len()
    }

    pub fn node_count(&self) -> usize {
        self.alive.iter().filter(|&&a| a).count()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.adj.len()).filter(move |&v| self.alive[v])
    }

    pub fn is_alive(&self, v: NodeId) -> bool {
        v < self.alive.len() && self.alive[v]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adj[v]
    }

    pub fn neighbor(&self, v: NodeId, port: usize) -> NodeId {
        self.adj[v][port]
    }

    /// The port of `neighbor(v, port)` that leads back to `v`.
    pub fn reverse_port(&self, v: NodeId, port: usize) -> usize {
        self.rev[v][port]
    }

    pub fn port_to(&self, v: NodeId, u: NodeId) -> Option<usize> {
        self.adj[v].iter().position(|&w| w == u)
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        u < self.adj.len() && self.adj[u].contains(&v)
    }

    /// All edges in ascending order; positions are the edge indices used by
    /// edge configurations.
    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_index(&self, e: EdgeId) -> Option<usize> {
        self.edges.binary_search(&e).ok()
    }

    /// Index of the edge behind port `port` of `v`.
    pub fn port_edge(&self, v: NodeId, port: usize) -> usize {
        self.port_edge[v][port]
    }

    pub fn add_node(&mut self) -> NodeId {
        self.adj.push(Vec::new());
        self.alive.push(true);
        self.rebuild();
        self.adj.len() - 1
    }

    /// Detaches the node and marks its slot dead.
    pub fn remove_node(&mut self, v: NodeId) -> Result<(), GraphError> {
        if !self.is_alive(v) {
            return Err(GraphError::UnknownNode(v));
        }
        for u in std::mem::take(&mut self.adj[v]) {
            self.adj[u].retain(|&w| w != v);
        }
        self.alive[v] = false;
        self.rebuild();
        Ok(())
    }

    pub fn add_edge(&mut self, u: NodeId, v: NodeId) -> Result<(), GraphError> {
        let e = EdgeId::new(u, v)?;
        for w in [u, v] {
            if !self.is_alive(w) {
                return Err(GraphError::UnknownNode(w));
            }
        }
        if self.has_edge(u, v) {
            return Err(GraphError::DuplicateEdge(e.a, e.b));
        }
        for w in [u, v] {
            if self.adj[w].len() + 1 > self.delta {
                return Err(GraphError::DegreeBoundViolated { node: w, degree: self.adj[w].len() + 1, delta: self.delta });
            }
        }
        self.adj[u].push(v);
        self.adj[v].push(u);
        self.rebuild();
        Ok(())
    }

    pub fn remove_edge(&mut self, u: NodeId, v: NodeId) -> Result<(), GraphError> {
        if !self.has_edge(u, v) {
            return Err(GraphError::UnknownEdge(u, v));
        }
        self.adj[u].retain(|&w| w != v);
        self.adj[v].retain(|&w| w != u);
        self.rebuild();
        Ok(())
    }

    /// Reorders the ports of `v`: new port `p` is old port `perm[p]`.
    pub fn permute_ports(&mut self, v: NodeId, perm: &[usize]) -> Result<(), GraphError> {
        let d = self.adj[v].len();
        let mut check = perm.to_vec();
        check.sort_unstable();
        if check != (0..d).collect::<Vec<_>>() {
            return Err(GraphError::Parse { line: 0, msg: format!("not a permutation of 0..{d}") });
        }
        self.adj[v] = perm.iter().map(|&q| self.adj[v][q]).collect();
        self.rebuild();
        Ok(())
    }

    /// Edge list in ascending order as plain pairs.
    pub fn edge_pairs(&self) -> Vec<(NodeId, NodeId)> {
        self.edges.iter().map(|e| e.endpoints()).collect()
    }
}

/// Multi-source BFS distances from `sources` to every slot.
pub fn distances_from(g: &Graph, sources: &[NodeId]) -> Vec<Distance> {
    let mut dist = vec![Distance::Infinite; g.slots()];
    let mut queue = VecDeque::new();
    for &s in sources {
        if g.is_alive(s) && dist[s] == Distance::Infinite {
            dist[s] = Distance::Finite(0);
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        let Distance::Finite(d) = dist[v] else { unreachable!() };
        for &u in g.neighbors(v) {
            if dist[u] == Distance::Infinite {
                dist[u] = Distance::Finite(d + 1);
                queue.push_back(u);
            }
        }
    }
    dist
}

/// `min_{w ∈ targets} δ(v, w)`.
pub fn distance(g: &Graph, v: NodeId, targets: &[NodeId]) -> Distance {
    if targets.is_empty() || !g.is_alive(v) {
        return Distance::Infinite;
    }
    distances_from(g, targets)[v]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_edge_list() {
        let g = Graph::from_edges(&[], 3).unwrap();
        assert_eq!(g.node_count(), 0);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn cycle_degrees() {
        let edges: Vec<_> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        let g = Graph::from_edges(&edges, 2).unwrap();
        assert_eq!(g.node_count(), 5);
        assert!(g.nodes().all(|v| g.degree(v) == 2));
    }

    #[test]
    fn triangle_with_pendant_exceeds_bound() {
        let err = Graph::from_edges(&[(0, 1), (1, 2), (2, 0), (0, 3)], 2).unwrap_err();
        assert!(matches!(err, GraphError::DegreeBoundViolated { node: 0, degree: 3, delta: 2 }));
    }

    #[test]
    fn rejects_loops_and_duplicates() {
        assert_eq!(Graph::from_edges(&[(1, 1)], 3).unwrap_err(), GraphError::SelfLoop(1));
        assert_eq!(Graph::from_edges(&[(0, 1), (1, 0)], 3).unwrap_err(), GraphError::DuplicateEdge(0, 1));
    }

    #[test]
    fn ports_follow_insertion_order() {
        let g = Graph::from_edges(&[(0, 2), (0, 1), (1, 2)], 2).unwrap();
        assert_eq!(g.neighbors(0), &[2, 1]);
        assert_eq!(g.neighbors(1), &[0, 2]);
        assert_eq!(g.reverse_port(0, 0), 0);
        assert_eq!(g.reverse_port(0, 1), 0);
        assert_eq!(g.reverse_port(1, 1), 1);
    }

    #[test]
    fn distances() {
        let g = Graph::from_edges(&[(0, 1), (1, 2)], 2).unwrap();
        assert_eq!(distance(&g, 1, &[1]), Distance::Finite(0));
        assert_eq!(distance(&g, 0, &[2]), Distance::Finite(2));
        assert_eq!(distance(&g, 0, &[]), Distance::Infinite);
        let h = Graph::with_nodes(4, &[(0, 1)], 2).unwrap();
        assert_eq!(distance(&h, 0, &[3]), Distance::Infinite);
    }

    #[test]
    fn mutation_keeps_port_bijection() {
        let mut g = Graph::from_edges(&[(0, 1), (1, 2), (2, 3)], 3).unwrap();
        g.add_edge(0, 3).unwrap();
        g.remove_edge(1, 2).unwrap();
        g.permute_ports(0, &[1, 0]).unwrap();
        let w = g.add_node();
        g.add_edge(w, 2).unwrap();
        g.remove_node(3).unwrap();
        for v in g.nodes() {
            for p in 0..g.degree(v) {
                let u = g.neighbor(v, p);
                assert_eq!(g.neighbor(u, g.reverse_port(v, p)), v);
            }
        }
        assert_eq!(g.node_count(), 4);
        assert_eq!(g.edge_pairs(), vec![(0, 1), (2, 4)]);
    }

    #[test]
    fn add_edge_respects_bound() {
        let mut g = Graph::from_edges(&[(0, 1), (0, 2)], 2).unwrap();
        assert!(matches!(g.add_edge(0, 3), Err(GraphError::UnknownNode(3))));
        g.add_node();
        assert!(matches!(g.add_edge(0, 3), Err(GraphError::DegreeBoundViolated { .. })));
    }
}
