use graph_core::{Configuration, Graph, Kind, Multiset};

use crate::{LclError, IN, MAT};

/// Coefficient families of the builtin potentials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coefficient {
    /// 1 if IN ∈ M or IN ∈ M′, else 2.
    Mis,
    /// Always 1.
    Unit,
    /// c + max(0, c−1−Σ_{i<c} M(i)) + max(0, c−1−Σ_{i<c} M′(i)).
    Incremental { c: u16 },
    /// 1 if Mat ∈ M, else 2.
    Matching,
}

/// A locally separable potential function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PotentialSpec {
    pub name: String,
    pub kind: Kind,
    pub coefficient: Coefficient,
}

impl PotentialSpec {
    pub fn mis() -> Self {
        Self { name: "mis".into(), kind: Kind::Node, coefficient: Coefficient::Mis }
    }

    pub fn coloring() -> Self {
        Self { name: "coloring".into(), kind: Kind::Node, coefficient: Coefficient::Unit }
    }

    pub fn incremental(c: usize) -> Self {
        Self { name: format!("incremental-coloring({c})"), kind: Kind::Node, coefficient: Coefficient::Incremental { c: c as u16 } }
    }

    pub fn mm() -> Self {
        Self { name: "mm".into(), kind: Kind::Edge, coefficient: Coefficient::Matching }
    }

    pub fn edge_coloring() -> Self {
        Self { name: "edge-coloring".into(), kind: Kind::Edge, coefficient: Coefficient::Unit }
    }

    /// σ(M, M′) of a node-kind spec.
    pub fn sigma_pair(&self, m: &Multiset, m2: &Multiset) -> u64 {
        match self.coefficient {
            Coefficient::Mis => {
                if m.contains(IN) || m2.contains(IN) {
                    1
                } else {
                    2
                }
            }
            Coefficient::Unit => 1,
            Coefficient::Incremental { c } => {
                let c = c as i64;
                let deficit = |x: &Multiset| (c - 1 - x.count_upto(c as usize - 1) as i64).max(0);
                (c + deficit(m) + deficit(m2)) as u64
            }
            Coefficient::Matching => self.sigma_single(m),
        }
    }

    /// σ(M) of an edge-kind spec.
    pub fn sigma_single(&self, m: &Multiset) -> u64 {
        match self.coefficient {
            Coefficient::Matching => {
                if m.contains(MAT) {
                    1
                } else {
                    2
                }
            }
            Coefficient::Unit => 1,
            _ => self.sigma_pair(m, &Multiset::empty(m.alphabet())),
        }
    }

    /// σ0 = σ(∅, ∅) (node kind) or σ(∅) (edge kind).
    pub fn sigma0(&self) -> u64 {
        let e = Multiset::empty(self.alphabet_hint());
        match self.kind {
            Kind::Node => self.sigma_pair(&e, &e),
            Kind::Edge => self.sigma_single(&e),
        }
    }

    fn alphabet_hint(&self) -> usize {
        match self.coefficient {
            Coefficient::Incremental { c } => c as usize,
            _ => 2,
        }
    }

    /// The same coefficients read on the other kind of element.
    pub fn with_kind(&self, kind: Kind) -> Self {
        Self { kind, ..self.clone() }
    }
}

/// π(G, C).
pub fn potential(p: &PotentialSpec, g: &Graph, c: &Configuration) -> Result<u64, LclError> {
    if p.kind != c.kind() {
        return Err(LclError::KindMismatch { spec: p.kind, config: c.kind() });
    }
    let alphabet = p.alphabet_hint().max(widest(c));
    let ms = |x: usize| c.neighbor_multiset(g, x, alphabet);
    let mut total = 0u64;
    match p.kind {
        Kind::Node => {
            for (u, v) in g.edge_pairs() {
                if c.get(u).is_none() && c.get(v).is_none() {
                    total += p.sigma_pair(&ms(u), &ms(v));
                }
            }
        }
        Kind::Edge => {
            for e in 0..g.edge_count() {
                if c.get(e).is_none() {
                    total += p.sigma_single(&ms(e));
                }
            }
        }
    }
    Ok(total)
}

fn widest(c: &Configuration) -> usize {
    c.values().iter().flatten().map(|l| l.0 as usize).max().unwrap_or(0)
}

/// Builtin potentials by problem name: `mis`, `coloring`,
/// `incremental-coloring(c)`, `mm`, `edge-coloring`.
pub fn builtin_potential(name: &str) -> Result<PotentialSpec, LclError> {
    match name {
        "mis" => Ok(PotentialSpec::mis()),
        "coloring" | "node-coloring" => Ok(PotentialSpec::coloring()),
        "mm" => Ok(PotentialSpec::mm()),
        "edge-coloring" => Ok(PotentialSpec::edge_coloring()),
        _ => name
            .strip_prefix("incremental-coloring(")
            .and_then(|r| r.strip_suffix(')'))
            .and_then(|c| c.parse::<usize>().ok())
            .filter(|&c| c >= 2)
            .map(PotentialSpec::incremental)
            .ok_or_else(|| LclError::UnknownProblem(name.to_string())),
    }
}
