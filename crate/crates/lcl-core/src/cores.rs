use std::collections::{BTreeMap, BTreeSet};

use graph_core::{Kind, Label, Multiset, MultisetSpace};
use serde::Serialize;

use crate::{LclError, LclSpec};

/// Largest neighbourhood an element can have: Δ for node-LCLs, 2Δ − 2 for
/// edge-LCLs (degrees in the line graph).
pub fn core_bound(lcl: &LclSpec, delta: usize) -> usize {
    match lcl.kind() {
        Kind::Node => delta,
        Kind::Edge => (2 * delta).saturating_sub(2),
    }
}

/// Enumeration bound used by the analyzers: the degree bound, raised to the
/// smallest size at which every output value has a satisfying multiset when
/// some value needs more neighbours than the degree bound allows (e.g. the
/// top colour of maximal (Δ+2)-colouring). Capped at the degree bound plus
/// the alphabet size.
pub fn analysis_bound(lcl: &LclSpec, delta: usize) -> usize {
    let base = core_bound(lcl, delta);
    let mut b = base;
    while b < base + lcl.alphabet() {
        let all = MultisetSpace::new(lcl.alphabet(), b).all();
        if lcl.labels().all(|o| all.iter().any(|m| lcl.holds(o, m))) {
            return b;
        }
        b += 1;
    }
    b
}

/// Every multiset up to a size bound, bucketed by size.
struct Space {
    space: MultisetSpace,
    all: Vec<Multiset>,
    layers: Vec<Vec<usize>>,
}

impl Space {
    fn new(alphabet: usize, bound: usize) -> Self {
        let space = MultisetSpace::new(alphabet, bound);
        let all = space.all();
        let mut layers = vec![Vec::new(); bound + 1];
        for (i, m) in all.iter().enumerate() {
            layers[m.size()].push(i);
        }
        Space { space, all, layers }
    }

    /// Ranks of the multisets obtained by removing one element.
    fn any_smaller(&self, i: usize, mut f: impl FnMut(usize) -> bool) -> Option<usize> {
        let mut w = self.all[i].clone();
        for l in self.all[i].support() {
            w.remove(l);
            let j = self.space.rank(&w);
            w.insert(l);
            if f(j) {
                return Some(j);
            }
        }
        None
    }

    /// Ranks of the multisets obtained by adding one element.
    fn any_larger(&self, i: usize, mut f: impl FnMut(usize) -> bool) -> Option<usize> {
        if self.all[i].size() == self.space.bound() {
            return None;
        }
        let mut w = self.all[i].clone();
        for x in 0..self.space.alphabet() {
            let l = Label::from_index(x);
            w.insert(l);
            let j = self.space.rank(&w);
            w.remove(l);
            if f(j) {
                return Some(j);
            }
        }
        None
    }
}

/// Satisfaction table of one output value, with its downward closure
/// (`down[i]`: some subset satisfies) and upward closure (`up[i]`: some
/// superset within the bound satisfies).
struct Table {
    sat: Vec<bool>,
    down: Vec<bool>,
}

impl Table {
    fn new(s: &Space, lcl: &LclSpec, o: Label) -> Self {
        let sat: Vec<bool> = s.all.iter().map(|m| lcl.holds(o, m)).collect();
        let mut down = sat.clone();
        for layer in &s.layers {
            for &i in layer {
                if !down[i] {
                    down[i] = s.any_smaller(i, |j| down[j]).is_some();
                }
            }
        }
        Table { sat, down }
    }

    fn up(&self, s: &Space) -> Vec<bool> {
        let mut up = self.sat.clone();
        for layer in s.layers.iter().rev() {
            for &i in layer {
                if !up[i] {
                    up[i] = s.any_larger(i, |j| up[j]).is_some();
                }
            }
        }
        up
    }

    fn cores(&self, s: &Space) -> Vec<Multiset> {
        let mut cores: Vec<Multiset> = (0..s.all.len())
            .filter(|&i| self.sat[i] && s.any_smaller(i, |j| self.down[j]).is_none())
            .map(|i| s.all[i].clone())
            .collect();
        cores.sort();
        cores
    }

    fn coverage(&self, s: &Space, o: Label) -> Option<CoverageViolation> {
        if !self.sat.iter().any(|&x| x) {
            return Some(CoverageViolation::Empty { output: o });
        }
        let up = self.up(s);
        for layer in &s.layers {
            for &i in layer {
                if !self.sat[i] && self.down[i] && up[i] {
                    let mut lo = i;
                    while !self.sat[lo] {
                        lo = s.any_smaller(lo, |j| self.down[j]).expect("down closure");
                    }
                    let mut hi = i;
                    while !self.sat[hi] {
                        hi = s.any_larger(hi, |j| up[j]).expect("up closure");
                    }
                    return Some(CoverageViolation::NotConvex {
                        output: o,
                        lower: s.all[lo].counts().to_vec(),
                        middle: s.all[i].counts().to_vec(),
                        upper: s.all[hi].counts().to_vec(),
                    });
                }
            }
        }
        None
    }
}

/// T*(o) up to size `max_size`: the ⊆-minimal satisfying multisets, sorted.
/// An empty result means T(o) has no member of size ≤ `max_size`.
pub fn compute_cores(lcl: &LclSpec, o: Label, max_size: usize) -> Vec<Multiset> {
    let s = Space::new(lcl.alphabet(), max_size);
    Table::new(&s, lcl, o).cores(&s)
}

fn digraph_from(alphabet: usize, cores: &[(Label, Vec<Multiset>)]) -> SupportiveDigraph {
    let mut arcs = BTreeSet::new();
    for (o, cs) in cores {
        for core in cs {
            for p in core.support() {
                arcs.insert((*o, p));
            }
        }
    }
    SupportiveDigraph { alphabet, arcs }
}

/// Output values with an arc `o → o′` whenever `o′` occurs in a core of `o`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SupportiveDigraph {
    pub alphabet: usize,
    pub arcs: BTreeSet<(Label, Label)>,
}

pub fn build_supportive_digraph(lcl: &LclSpec, delta: usize) -> SupportiveDigraph {
    let s = Space::new(lcl.alphabet(), analysis_bound(lcl, delta));
    let cores: Vec<_> = lcl.labels().map(|o| (o, Table::new(&s, lcl, o).cores(&s))).collect();
    digraph_from(lcl.alphabet(), &cores)
}

/// ν: number of arcs on a longest directed path; an error if the digraph
/// has a cycle.
pub fn influence_number(d: &SupportiveDigraph) -> Result<usize, LclError> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done(usize),
    }
    fn visit(v: usize, d: &SupportiveDigraph, marks: &mut [Mark]) -> Result<usize, LclError> {
        match marks[v] {
            Mark::Done(x) => return Ok(x),
            Mark::Active => return Err(LclError::Cyclic(v as u16 + 1)),
            Mark::New => {}
        }
        marks[v] = Mark::Active;
        let mut best = 0;
        for &(a, b) in d.arcs.range((Label::from_index(v), Label(0))..) {
            if a.index() != v {
                break;
            }
            best = best.max(1 + visit(b.index(), d, marks)?);
        }
        marks[v] = Mark::Done(best);
        Ok(best)
    }
    let mut marks = vec![Mark::New; d.alphabet];
    let mut nu = 0;
    for v in 0..d.alphabet {
        nu = nu.max(visit(v, d, &mut marks)?);
    }
    Ok(nu)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum CoverageViolation {
    /// T(o) has no member within the bound.
    Empty { output: Label },
    /// `lower ⊆ middle ⊆ upper` with `lower, upper ∈ T(o)` and `middle ∉ T(o)`.
    NotConvex { output: Label, lower: Vec<u16>, middle: Vec<u16>, upper: Vec<u16> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverageReport {
    pub ok: bool,
    pub violation: Option<CoverageViolation>,
}

/// Exhaustive core-coverage check over all multisets up to
/// [`analysis_bound`].
pub fn check_core_coverage(lcl: &LclSpec, delta: usize) -> CoverageReport {
    let s = Space::new(lcl.alphabet(), analysis_bound(lcl, delta));
    let violation = lcl.labels().find_map(|o| Table::new(&s, lcl, o).coverage(&s, o));
    CoverageReport { ok: violation.is_none(), violation }
}

/// Mechanical eligibility checks of an LCL at degree bound Δ.
#[derive(Debug, Clone, Serialize)]
pub struct EligibilityReport {
    pub problem: String,
    pub delta: usize,
    /// Largest multiset size enumerated.
    pub bound: usize,
    pub core_coverage_ok: bool,
    pub coverage_violation: Option<CoverageViolation>,
    /// `None` when the supportive digraph is cyclic.
    pub influence_number: Option<usize>,
    /// Cores per output value, as multiplicity vectors.
    pub cores: BTreeMap<u16, Vec<Vec<u16>>>,
    pub digraph: Vec<(u16, u16)>,
}

pub fn analyze(lcl: &LclSpec, delta: usize) -> EligibilityReport {
    let bound = analysis_bound(lcl, delta);
    let s = Space::new(lcl.alphabet(), bound);
    let mut cores = Vec::new();
    let mut violation = None;
    for o in lcl.labels() {
        let t = Table::new(&s, lcl, o);
        if violation.is_none() {
            violation = t.coverage(&s, o);
        }
        cores.push((o, t.cores(&s)));
    }
    let digraph = digraph_from(lcl.alphabet(), &cores);
    EligibilityReport {
        problem: lcl.name().to_string(),
        delta,
        bound,
        core_coverage_ok: violation.is_none(),
        coverage_violation: violation,
        influence_number: influence_number(&digraph).ok(),
        cores: cores.into_iter().map(|(o, cs)| (o.0, cs.into_iter().map(|m| m.counts().to_vec()).collect())).collect(),
        digraph: digraph.arcs.iter().map(|(a, b)| (a.0, b.0)).collect(),
    }
}
