use engine::Protocol;
use graph_core::{clone_graph, generate, line_graph, Configuration, Graph, NodeId};
use lcl_core::{analyze, EligibilityReport, LclSpec, PotentialSpec};
use pps::{RngStream, StreamKey};
use serde::{Deserialize, Serialize};
use transformer::{
    eligibility_probe, CloneHost, EdgeTransformer, LineSim, NodePhase, NodeTransformer, OutputMap, PhaseRunner, ProbeReport,
};

use crate::{
    AlgorithmError, ColoringPhase, EdgeColoringDetect, EdgeColoringPhase, IncrementalPhase, MatchingDetect, MatchingPhase, MisPhase,
};

/// Names accepted by [`build`].
pub const PROBLEMS: [&str; 10] = [
    "mis",
    "node-coloring",
    "max-node-coloring",
    "delta1-coloring",
    "inc-node-coloring",
    "mm",
    "edge-coloring",
    "2delta1-edge-coloring",
    "max-edge-coloring",
    "inc-edge-coloring",
];

/// A problem instance: name plus the parameters some problems take.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub name: String,
    pub delta: usize,
    /// Number of colors of maximal and incremental colorings.
    #[serde(default)]
    pub c: Option<usize>,
    /// Palette of node and edge coloring.
    #[serde(default)]
    pub palette: Option<usize>,
}

impl ProblemSpec {
    pub fn new(name: &str, delta: usize) -> Self {
        ProblemSpec { name: name.to_string(), delta, c: None, palette: None }
    }
}

/// Phase procedure, target LCL and degree bound of the level the
/// transformer actually runs on.
#[derive(Debug, Clone)]
pub struct Inner {
    pub lcl: LclSpec,
    pub delta: usize,
    pub potential: PotentialSpec,
    pub nu: usize,
    pub phi: u16,
    pub sigma0: u64,
}

/// A transformed algorithm, one variant per protocol type.
#[derive(Debug, Clone)]
pub enum Algorithm {
    Mis(NodeTransformer<MisPhase>),
    NodeColoring(NodeTransformer<ColoringPhase>),
    CloneMis(CloneHost<MisPhase>),
    Incremental(NodeTransformer<IncrementalPhase>),
    Matching(EdgeTransformer<MatchingPhase, MatchingDetect>),
    EdgeColoring(EdgeTransformer<EdgeColoringPhase, EdgeColoringDetect>),
    LineMis(LineSim<MisPhase>),
    LineIncremental(LineSim<IncrementalPhase>),
}

/// Generic operation over any [`Algorithm`] variant.
pub trait Visitor {
    type Output;
    fn visit<P: Protocol + Clone + 'static>(self, proto: P) -> Self::Output;
}

impl Algorithm {
    pub fn visit<V: Visitor>(self, v: V) -> V::Output {
        match self {
            Algorithm::Mis(p) => v.visit(p),
            Algorithm::NodeColoring(p) => v.visit(p),
            Algorithm::CloneMis(p) => v.visit(p),
            Algorithm::Incremental(p) => v.visit(p),
            Algorithm::Matching(p) => v.visit(p),
            Algorithm::EdgeColoring(p) => v.visit(p),
            Algorithm::LineMis(p) => v.visit(p),
            Algorithm::LineIncremental(p) => v.visit(p),
        }
    }
}

/// A built problem: the algorithm plus what the analyzers need.
#[derive(Debug, Clone)]
pub struct Problem {
    pub spec: ProblemSpec,
    pub algorithm: Algorithm,
    pub host: LclSpec,
    pub inner: Inner,
    /// Layers of a clone-graph reduction (1 when there is none).
    pub alpha: usize,
    pub shape: Shape,
}

/// How the level the phase procedure runs on derives from the host graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Shape {
    Node,
    Edge,
    Clone,
    Line,
}

impl Problem {
    pub fn name(&self) -> &str {
        &self.spec.name
    }

    /// The level graph of `host` the phase procedure runs on.
    pub fn level_graph(&self, host: &Graph) -> Graph {
        match self.shape {
            Shape::Node | Shape::Edge => host.clone(),
            Shape::Clone => clone_graph(host, self.alpha).0,
            Shape::Line => clone_graph(&line_graph(host).0, self.alpha).0,
        }
    }

    /// Core, coverage and influence analysis of the host LCL and of the
    /// level LCL.
    pub fn analyze(&self) -> (EligibilityReport, EligibilityReport) {
        (analyze(&self.host, self.spec.delta), analyze(&self.inner.lcl, self.inner.delta))
    }

    /// [`eligibility_probe`] of the phase procedure on random level graphs
    /// of host graphs with at most `max_n` nodes.
    pub fn probe(&self, trials: usize, max_n: usize, seed: u64) -> ProbeReport {
        let delta = self.spec.delta;
        let graphs = |rng: &mut RngStream| {
            let n = 2 + rng.below(max_n.max(2) - 1);
            let p = 0.1 + 0.5 * (rng.below(1000) as f64 / 1000.0);
            let host = generate::random_bounded(n, p, delta, rng).expect("random graph");
            self.level_graph(&host)
        };
        let key = |v: NodeId| StreamKey::Node(v);
        let inner = &self.inner;
        match &self.algorithm {
            Algorithm::Mis(t) => node_probe(t.phase(), inner, trials, seed, graphs),
            Algorithm::NodeColoring(t) => node_probe(t.phase(), inner, trials, seed, graphs),
            Algorithm::Incremental(t) => node_probe(t.phase(), inner, trials, seed, graphs),
            Algorithm::CloneMis(t) => node_probe(t.phase(), inner, trials, seed, graphs),
            Algorithm::LineMis(t) => node_probe(t.phase(), inner, trials, seed, graphs),
            Algorithm::LineIncremental(t) => node_probe(t.phase(), inner, trials, seed, graphs),
            Algorithm::Matching(t) => eligibility_probe(&inner.lcl, &inner.potential, trials, seed, graphs, |r: &mut PhaseRunner, g: &Graph, c: &Configuration| {
                r.edge_phase(t.phase(), g, c, key)
            }),
            Algorithm::EdgeColoring(t) => {
                eligibility_probe(&inner.lcl, &inner.potential, trials, seed, graphs, |r: &mut PhaseRunner, g: &Graph, c: &Configuration| {
                    r.edge_phase(t.phase(), g, c, key)
                })
            }
        }
    }
}

fn node_probe<Ph: NodePhase>(
    ph: &Ph,
    inner: &Inner,
    trials: usize,
    seed: u64,
    graphs: impl FnMut(&mut RngStream) -> Graph,
) -> ProbeReport {
    eligibility_probe(&inner.lcl, &inner.potential, trials, seed, graphs, |r: &mut PhaseRunner, g: &Graph, c: &Configuration| {
        r.node_phase(ph, &inner.lcl, g, c, StreamKey::Node)
    })
}

fn inner(lcl: LclSpec, delta: usize, potential: PotentialSpec, nu: usize, phi: u16) -> Inner {
    let sigma0 = potential.sigma0();
    Inner { lcl, delta, potential, nu, phi, sigma0 }
}

fn check_c(name: &str, c: usize, max: usize) -> Result<usize, AlgorithmError> {
    if c < 2 || c > max {
        return Err(AlgorithmError::InvalidParameter(format!("{name}: c = {c} outside 2..={max}")));
    }
    Ok(c)
}

/// Default edge-coloring palette, ⌈2.5Δ⌉ but at least 2Δ+1.
pub fn default_edge_palette(delta: usize) -> usize {
    (5 * delta).div_ceil(2).max(2 * delta + 1)
}

/// Builds a registry problem.
pub fn build(spec: &ProblemSpec) -> Result<Problem, AlgorithmError> {
    let delta = spec.delta;
    if delta == 0 {
        return Err(AlgorithmError::InvalidParameter("Δ must be positive".into()));
    }
    let line_delta = (2 * delta).saturating_sub(2).max(1);
    let name = spec.name.as_str();
    let mut alpha = 1;
    let (algorithm, host, inner, shape) = match name {
        "mis" => {
            let lcl = LclSpec::mis();
            let t = NodeTransformer::new(name, MisPhase, lcl.clone(), PotentialSpec::mis(), 1)?;
            (Algorithm::Mis(t), lcl.clone(), inner(lcl, delta, PotentialSpec::mis(), 1, 3), Shape::Node)
        }
        "node-coloring" => {
            let palette = spec.palette.unwrap_or(delta + 1);
            let ph = ColoringPhase::new(palette, delta)?;
            let lcl = LclSpec::proper_coloring(palette);
            let t = NodeTransformer::new(name, ph, lcl.clone(), PotentialSpec::coloring(), 0)?;
            (Algorithm::NodeColoring(t), lcl.clone(), inner(lcl, delta, PotentialSpec::coloring(), 0, 3), Shape::Node)
        }
        "max-node-coloring" | "delta1-coloring" => {
            let c = if name == "delta1-coloring" {
                if spec.c.is_some_and(|c| c != delta + 2) {
                    return Err(AlgorithmError::InvalidParameter("delta1-coloring fixes c = Δ+2".into()));
                }
                delta + 2
            } else {
                check_c(name, spec.c.unwrap_or(3), delta + 2)?
            };
            alpha = c - 1;
            let host = LclSpec::maximal_coloring(c).renamed(name);
            let t = CloneHost::new(name, MisPhase, LclSpec::mis(), host.clone(), PotentialSpec::mis(), 1, alpha)?;
            (Algorithm::CloneMis(t), host, inner(LclSpec::mis(), delta + alpha - 1, PotentialSpec::mis(), 1, 3), Shape::Clone)
        }
        "inc-node-coloring" => {
            let c = check_c(name, spec.c.unwrap_or(3), delta + 2)?;
            let lcl = LclSpec::incremental_coloring(c);
            let pot = PotentialSpec::incremental(c);
            let t = NodeTransformer::new(name, IncrementalPhase::new(c), lcl.clone(), pot.clone(), c - 1)?;
            (Algorithm::Incremental(t), lcl.clone(), inner(lcl, delta, pot, c - 1, 3), Shape::Node)
        }
        "mm" => {
            let lcl = LclSpec::maximal_matching();
            let t = EdgeTransformer::new(name, MatchingPhase, MatchingDetect, lcl.clone(), PotentialSpec::mm(), 1)?;
            (Algorithm::Matching(t), lcl.clone(), inner(lcl, delta, PotentialSpec::mm(), 1, 4), Shape::Edge)
        }
        "edge-coloring" => {
            let palette = spec.palette.unwrap_or_else(|| default_edge_palette(delta));
            let ph = EdgeColoringPhase::new(palette, delta)?;
            let lcl = LclSpec::edge_coloring(palette);
            let t = EdgeTransformer::new(name, ph, EdgeColoringDetect, lcl.clone(), PotentialSpec::edge_coloring(), 0)?;
            (Algorithm::EdgeColoring(t), lcl.clone(), inner(lcl, delta, PotentialSpec::edge_coloring(), 0, 5), Shape::Edge)
        }
        "max-edge-coloring" | "2delta1-edge-coloring" => {
            let c = if name == "2delta1-edge-coloring" {
                if spec.c.is_some_and(|c| c != 2 * delta) {
                    return Err(AlgorithmError::InvalidParameter("2delta1-edge-coloring fixes c = 2Δ".into()));
                }
                (2 * delta).max(2)
            } else {
                check_c(name, spec.c.unwrap_or(3), (2 * delta).max(2))?
            };
            alpha = c - 1;
            let host = LclSpec::maximal_edge_coloring(c).renamed(name);
            let t = LineSim::new(name, MisPhase, LclSpec::mis(), host.clone(), PotentialSpec::mis(), 1, alpha, OutputMap::CloneColor)?;
            (Algorithm::LineMis(t), host, inner(LclSpec::mis(), line_delta + alpha - 1, PotentialSpec::mis(), 1, 3), Shape::Line)
        }
        "inc-edge-coloring" => {
            let c = check_c(name, spec.c.unwrap_or(3), (2 * delta).max(2))?;
            let host = LclSpec::incremental_edge_coloring(c);
            let lcl = LclSpec::incremental_coloring(c);
            let pot = PotentialSpec::incremental(c);
            let t = LineSim::new(name, IncrementalPhase::new(c), lcl.clone(), host.clone(), pot.clone(), c - 1, 1, OutputMap::Identity)?;
            (Algorithm::LineIncremental(t), host, inner(lcl, line_delta, pot, c - 1, 3), Shape::Line)
        }
        other => return Err(AlgorithmError::UnknownProblem(other.to_string())),
    };
    Ok(Problem { spec: spec.clone(), algorithm, host, inner, alpha, shape })
}
