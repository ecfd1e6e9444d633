use crate::{EdgeId, Graph, NodeId};

/// Bijection between the nodes of L(G) and the edges of G. Node `i` of the
/// line graph is `edges[i]`, i.e. the `i`-th edge of G in ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineMap {
    pub edges: Vec<EdgeId>,
}

impl LineMap {
    pub fn edge(&self, node: NodeId) -> EdgeId {
        self.edges[node]
    }

    pub fn node(&self, e: EdgeId) -> Option<NodeId> {
        self.edges.binary_search(&e).ok()
    }
}

/// L(G). The ports of `e = {a, b}` (a < b) list the other edges at `a` in
/// `a`'s port order, then the other edges at `b` in `b`'s port order.
pub fn line_graph(g: &Graph) -> (Graph, LineMap) {
    let edges = g.edges().to_vec();
    let adj = edges
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let (a, b) = e.endpoints();
            let mut ports = Vec::new();
            for w in [a, b] {
                for p in 0..g.degree(w) {
                    let f = g.port_edge(w, p);
                    if f != i {
                        ports.push(f);
                    }
                }
            }
            ports
        })
        .collect();
    let delta = (2 * g.delta()).saturating_sub(2).max(1);
    let lg = Graph::from_ports(adj, delta).expect("line graph is simple");
    (lg, LineMap { edges })
}

/// Handle layout of a clone graph: clone `(v, i)` (layer `i` in `0..alpha`)
/// is node `i * slots + v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CloneMap {
    pub slots: usize,
    pub alpha: usize,
}

impl CloneMap {
    pub fn handle(&self, v: NodeId, layer: usize) -> NodeId {
        layer * self.slots + v
    }

    pub fn clone_of(&self, handle: NodeId) -> (NodeId, usize) {
        (handle % self.slots, handle / self.slots)
    }
}

/// G_α. The ports of `(v, i)` list the other clones `(v, j)` in ascending
/// `j`, then the layer copies `(u, i)` in `v`'s port order.
pub fn clone_graph(g: &Graph, alpha: usize) -> (Graph, CloneMap) {
    assert!(alpha >= 1, "alpha must be positive");
    let map = CloneMap { slots: g.slots(), alpha };
    let mut adj = vec![Vec::new(); g.slots() * alpha];
    for v in g.nodes() {
        for i in 0..alpha {
            let ports = &mut adj[map.handle(v, i)];
            ports.extend((0..alpha).filter(|&j| j != i).map(|j| map.handle(v, j)));
            ports.extend(g.neighbors(v).iter().map(|&u| map.handle(u, i)));
        }
    }
    let mut cg = Graph::from_ports(adj, g.delta() + alpha - 1).expect("clone graph is simple");
    for v in 0..g.slots() {
        if !g.is_alive(v) {
            for i in 0..alpha {
                cg.remove_node(map.handle(v, i)).expect("dead slot");
            }
        }
    }
    (cg, map)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_line_graph_is_an_edge() {
        let g = Graph::from_edges(&[(0, 1), (1, 2)], 2).unwrap();
        let (lg, map) = line_graph(&g);
        assert_eq!(lg.node_count(), 2);
        assert_eq!(lg.edge_pairs(), vec![(0, 1)]);
        assert_eq!(map.edge(0), EdgeId::new(0, 1).unwrap());
    }

    #[test]
    fn star_line_graph_is_complete() {
        let g = Graph::from_edges(&[(0, 1), (0, 2), (0, 3), (0, 4)], 4).unwrap();
        let (lg, _) = line_graph(&g);
        assert_eq!(lg.node_count(), 4);
        assert_eq!(lg.edge_count(), 6);
        assert_eq!(lg.delta(), 6);
    }

    #[test]
    fn clone_of_triangle() {
        let g = Graph::from_edges(&[(0, 1), (1, 2), (2, 0)], 2).unwrap();
        let (cg, map) = clone_graph(&g, 2);
        assert_eq!(cg.node_count(), 6);
        assert_eq!(cg.edge_count(), 9);
        assert_eq!(cg.delta(), 3);
        assert!(cg.has_edge(map.handle(0, 0), map.handle(0, 1)));
        assert!(cg.has_edge(map.handle(0, 1), map.handle(1, 1)));
        assert!(!cg.has_edge(map.handle(0, 0), map.handle(1, 1)));
    }

    #[test]
    fn clone_of_single_node_is_a_clique() {
        let g = Graph::empty(1, 1).unwrap();
        let (cg, _) = clone_graph(&g, 3);
        assert_eq!(cg.edge_pairs(), vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn clone_with_alpha_one_is_identity() {
        let g = Graph::from_edges(&[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)], 3).unwrap();
        let (cg, _) = clone_graph(&g, 1);
        assert_eq!(cg, g);
    }
}
