use std::fmt;
use std::sync::Arc;

use graph_core::{Kind, Label, Multiset};

/// MIS output values.
pub const IN: Label = Label(1);
pub const OUT: Label = Label(2);
/// Maximal matching output values.
pub const MAT: Label = Label(1);
pub const UNM: Label = Label(2);

type Predicate = dyn Fn(Label, &Multiset) -> bool + Send + Sync;

/// Predicate family of an LCL.
#[derive(Clone)]
pub enum Rule {
    /// `ℓ(IN, M) ⇔ IN ∉ M`, `ℓ(OUT, M) ⇔ IN ∈ M` (also maximal matching
    /// under Mat ↔ IN, UnM ↔ OUT).
    Independent,
    /// `ℓ(i, M) ⇔ i ∉ M`.
    Proper,
    /// Colours `i < c` are independent; colour `c` needs every `j < c` in M.
    Maximal { c: u16 },
    /// Colours `i < c` are independent; colour `i` needs at least `i − 1`
    /// neighbours with colours below `i`.
    Incremental { c: u16 },
    Custom(Arc<Predicate>),
}

impl fmt::Debug for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Independent => write!(f, "Independent"),
            Rule::Proper => write!(f, "Proper"),
            Rule::Maximal { c } => write!(f, "Maximal {{ c: {c} }}"),
            Rule::Incremental { c } => write!(f, "Incremental {{ c: {c} }}"),
            Rule::Custom(_) => write!(f, "Custom"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct LclSpec {
    name: String,
    kind: Kind,
    alphabet: usize,
    rule: Rule,
}

impl LclSpec {
    pub fn new(name: impl Into<String>, kind: Kind, alphabet: usize, rule: Rule) -> Self {
        LclSpec { name: name.into(), kind, alphabet, rule }
    }

    pub fn custom(
        name: impl Into<String>,
        kind: Kind,
        alphabet: usize,
        f: impl Fn(Label, &Multiset) -> bool + Send + Sync + 'static,
    ) -> Self {
        Self::new(name, kind, alphabet, Rule::Custom(Arc::new(f)))
    }

    pub fn mis() -> Self {
        Self::new("mis", Kind::Node, 2, Rule::Independent)
    }

    pub fn proper_coloring(palette: usize) -> Self {
        Self::new("node-coloring", Kind::Node, palette, Rule::Proper)
    }

    pub fn maximal_coloring(c: usize) -> Self {
        Self::new("max-node-coloring", Kind::Node, c, Rule::Maximal { c: c as u16 })
    }

    pub fn incremental_coloring(c: usize) -> Self {
        Self::new("inc-node-coloring", Kind::Node, c, Rule::Incremental { c: c as u16 })
    }

    pub fn maximal_matching() -> Self {
        Self::new("mm", Kind::Edge, 2, Rule::Independent)
    }

    pub fn edge_coloring(palette: usize) -> Self {
        Self::new("edge-coloring", Kind::Edge, palette, Rule::Proper)
    }

    pub fn maximal_edge_coloring(c: usize) -> Self {
        Self::new("max-edge-coloring", Kind::Edge, c, Rule::Maximal { c: c as u16 })
    }

    pub fn incremental_edge_coloring(c: usize) -> Self {
        Self::new("inc-edge-coloring", Kind::Edge, c, Rule::Incremental { c: c as u16 })
    }

    /// Same predicate, evaluated on the other kind of element. An edge-LCL
    /// on G is the node-LCL with the same predicate on L(G).
    pub fn with_kind(&self, kind: Kind) -> Self {
        LclSpec { kind, ..self.clone() }
    }

    pub fn renamed(&self, name: impl Into<String>) -> Self {
        LclSpec { name: name.into(), ..self.clone() }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn rule(&self) -> &Rule {
        &self.rule
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> {
        (1..=self.alphabet as u16).map(Label)
    }

    /// `ℓ(o, M)`.
    pub fn holds(&self, o: Label, m: &Multiset) -> bool {
        debug_assert!((1..=self.alphabet as u16).contains(&o.0));
        match &self.rule {
            Rule::Independent => {
                if o == IN {
                    !m.contains(IN)
                } else {
                    m.contains(IN)
                }
            }
            Rule::Proper => !m.contains(o),
            Rule::Maximal { c } => {
                if o.0 < *c {
                    !m.contains(o)
                } else {
                    (1..*c).all(|j| m.contains(Label(j)))
                }
            }
            Rule::Incremental { c } => {
                let independent = o.0 >= *c || !m.contains(o);
                independent && m.count_upto(o.0 as usize - 1) + 1 >= o.0 as usize
            }
            Rule::Custom(f) => f(o, m),
        }
    }

    /// Human-readable value name.
    pub fn label_name(&self, o: Label) -> String {
        match (&self.rule, self.kind) {
            (Rule::Independent, Kind::Node) => if o == IN { "IN" } else { "OUT" }.to_string(),
            (Rule::Independent, Kind::Edge) => if o == MAT { "Mat" } else { "UnM" }.to_string(),
            _ => o.to_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ms(alphabet: usize, ls: &[u16]) -> Multiset {
        Multiset::from_labels(alphabet, ls.iter().map(|&l| Label(l)))
    }

    #[test]
    fn mis_predicate() {
        let l = LclSpec::mis();
        assert!(l.holds(IN, &ms(2, &[2, 2])));
        assert!(!l.holds(IN, &ms(2, &[1])));
        assert!(!l.holds(OUT, &ms(2, &[])));
        assert!(l.holds(OUT, &ms(2, &[1, 2])));
    }

    #[test]
    fn maximal_coloring_predicate() {
        let l = LclSpec::maximal_coloring(3);
        assert!(l.holds(Label(1), &ms(3, &[2, 3, 3])));
        assert!(!l.holds(Label(2), &ms(3, &[2])));
        assert!(l.holds(Label(3), &ms(3, &[1, 2, 3])));
        assert!(!l.holds(Label(3), &ms(3, &[1, 1])));
    }

    #[test]
    fn incremental_predicate() {
        let l = LclSpec::incremental_coloring(3);
        assert!(l.holds(Label(1), &ms(3, &[])));
        assert!(!l.holds(Label(1), &ms(3, &[1])));
        assert!(l.holds(Label(2), &ms(3, &[1])));
        assert!(!l.holds(Label(2), &ms(3, &[3])));
        assert!(l.holds(Label(3), &ms(3, &[1, 2])));
        assert!(l.holds(Label(3), &ms(3, &[1, 1, 3])));
        assert!(!l.holds(Label(3), &ms(3, &[2, 3])));
    }

    #[test]
    fn incremental_with_two_colours_is_mis() {
        let inc = LclSpec::incremental_coloring(2);
        let mis = LclSpec::mis();
        for a in 0..4u16 {
            for b in 0..4u16 {
                let m = Multiset::from_counts(&[a, b]);
                for o in [Label(1), Label(2)] {
                    assert_eq!(inc.holds(o, &m), mis.holds(o, &m), "{o:?} {m:?}");
                }
            }
        }
    }
}
