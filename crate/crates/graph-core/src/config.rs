use serde::{Deserialize, Serialize};

use crate::{Graph, Label, Multiset};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Node,
    Edge,
}

/// Assignment of an output value or ⊥ (`None`) to every node slot (node
/// kind) or to every edge index of the graph (edge kind).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    kind: Kind,
    values: Vec<Option<Label>>,
}

impl Configuration {
    pub fn new(kind: Kind, values: Vec<Option<Label>>) -> Self {
        Configuration { kind, values }
    }

    pub fn node(values: Vec<Option<Label>>) -> Self {
        Self::new(Kind::Node, values)
    }

    pub fn edge(values: Vec<Option<Label>>) -> Self {
        Self::new(Kind::Edge, values)
    }

    /// All-⊥ configuration sized for `g`.
    pub fn undecided_for(kind: Kind, g: &Graph) -> Self {
        let len = match kind {
            Kind::Node => g.slots(),
            Kind::Edge => g.edge_count(),
        };
        Self::new(kind, vec![None; len])
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn values(&self) -> &[Option<Label>] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, x: usize) -> Option<Label> {
        self.values[x]
    }

    pub fn set(&mut self, x: usize, value: Option<Label>) {
        self.values[x] = value;
    }

    /// Elements of the domain: live nodes or all edges of `g`.
    pub fn domain<'a>(&'a self, g: &'a Graph) -> Box<dyn Iterator<Item = usize> + 'a> {
        match self.kind {
            Kind::Node => Box::new(g.nodes()),
            Kind::Edge => Box::new(0..g.edge_count()),
        }
    }

    /// D(C).
    pub fn decided(&self, g: &Graph) -> Vec<usize> {
        self.domain(g).filter(|&x| self.values[x].is_some()).collect()
    }

    /// U(C).
    pub fn undecided(&self, g: &Graph) -> Vec<usize> {
        self.domain(g).filter(|&x| self.values[x].is_none()).collect()
    }

    pub fn is_complete(&self, g: &Graph) -> bool {
        self.domain(g).all(|x| self.values[x].is_some())
    }

    /// Neighbouring elements of `x`: graph neighbours for node kind, edges
    /// sharing exactly one endpoint for edge kind.
    pub fn neighbors_of(&self, g: &Graph, x: usize) -> Vec<usize> {
        match self.kind {
            Kind::Node => g.neighbors(x).to_vec(),
            Kind::Edge => {
                let (u, v) = g.edges()[x].endpoints();
                let mut out = Vec::with_capacity(g.degree(u) + g.degree(v));
                for w in [u, v] {
                    for p in 0..g.degree(w) {
                        let f = g.port_edge(w, p);
                        if f != x {
                            out.push(f);
                        }
                    }
                }
                out
            }
        }
    }

    /// C[x]: the multiset of outputs of decided neighbouring elements.
    pub fn neighbor_multiset(&self, g: &Graph, x: usize, alphabet: usize) -> Multiset {
        let mut m = Multiset::empty(alphabet);
        match self.kind {
            Kind::Node => {
                for &u in g.neighbors(x) {
                    if let Some(l) = self.values[u] {
                        m.insert(l);
                    }
                }
            }
            Kind::Edge => {
                let (u, v) = g.edges()[x].endpoints();
                for w in [u, v] {
                    for p in 0..g.degree(w) {
                        let f = g.port_edge(w, p);
                        if f != x {
                            if let Some(l) = self.values[f] {
                                m.insert(l);
                            }
                        }
                    }
                }
            }
        }
        m
    }
}
