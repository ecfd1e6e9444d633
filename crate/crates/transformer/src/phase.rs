use std::fmt::Debug;

use graph_core::{Label, Multiset};
use pps::RngStream;
use serde::Serialize;

/// Content of the phase field of a message.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum PhaseField<P> {
    Nil,
    /// Output register as announced at step 0, or re-announced by a decided
    /// node.
    Announce(Option<Label>),
    Work(P),
}

/// What a working node sees at step `j ≥ 1` of a node phase.
#[derive(Debug)]
pub struct WorkView<'a, P> {
    pub delta: usize,
    /// Number of engaged (phase-synchronized, undecided) neighbors.
    pub engaged: usize,
    /// Payloads received from engaged neighbors in the previous step.
    pub received: &'a [P],
}

/// Fault-free phase procedure of a node-LCL algorithm.
///
/// Steps `1..φ−1` are working steps whose payload is sent to every engaged
/// neighbor. Step `φ−1` is the decision step: [`NodePhase::decide`] looks at
/// the phase registers and the last payloads, and [`NodePhase::resolve`]
/// combines that verdict with the multiset of decided neighbor outputs.
pub trait NodePhase: Send + Sync {
    type Regs: Clone + Debug + PartialEq + Send + Sync;
    type Payload: Clone + Debug + PartialEq + Send + Sync;
    type Verdict: Clone + Debug + PartialEq + Send + Sync;

    fn phi(&self) -> u16;

    /// Registers at step 0.
    fn fresh_regs(&self) -> Self::Regs;

    fn random_regs(&self, delta: usize, rng: &mut RngStream) -> Self::Regs;

    fn random_payload(&self, delta: usize, rng: &mut RngStream) -> Self::Payload;

    fn random_verdict(&self, delta: usize, rng: &mut RngStream) -> Self::Verdict;

    /// Working step `j` with `1 ≤ j < φ−1`.
    fn work(&self, j: u16, view: &WorkView<'_, Self::Payload>, regs: &mut Self::Regs, rng: &mut RngStream) -> Option<Self::Payload>;

    fn decide(&self, view: &WorkView<'_, Self::Payload>, regs: &Self::Regs) -> Self::Verdict;

    /// Output to commit, given the outputs of the decided neighbors.
    fn resolve(&self, verdict: &Self::Verdict, decided: &Multiset) -> Option<Label>;
}

/// What a node sees at step `j ≥ 1` of an edge phase.
#[derive(Debug)]
pub struct EdgeView<'a, P> {
    pub delta: usize,
    /// Ports engaged in the current phase.
    pub engaged: &'a [bool],
    /// Payload received on each port in the previous step.
    pub received: &'a [Option<P>],
    /// The node's own output registers.
    pub outs: &'a [Option<Label>],
}

/// Fault-free phase procedure of an edge-LCL algorithm.
pub trait EdgePhase: Send + Sync {
    type Regs: Clone + Debug + PartialEq + Send + Sync;
    type Payload: Clone + Debug + PartialEq + Send + Sync;

    fn phi(&self) -> u16;

    fn fresh_regs(&self, degree: usize) -> Self::Regs;

    fn random_regs(&self, degree: usize, delta: usize, rng: &mut RngStream) -> Self::Regs;

    /// New port `p` inherits old port `map[p]`.
    fn reshape_regs(&self, regs: &mut Self::Regs, map: &[Option<usize>]);

    fn random_payload(&self, delta: usize, rng: &mut RngStream) -> Self::Payload;

    /// Step `j ≥ 1`. Fills `send` (one slot per port) and, at `j = φ−1`,
    /// returns the `(port, output)` decisions.
    fn step(
        &self,
        j: u16,
        view: &EdgeView<'_, Self::Payload>,
        regs: &mut Self::Regs,
        rng: &mut RngStream,
        send: &mut [Option<Self::Payload>],
    ) -> Vec<(usize, Label)>;
}

/// Per-port detection procedure of an edge-LCL. Port consistency is checked
/// by the transformer; this adds whatever else the predicate needs.
pub trait EdgeDetect: Send + Sync {
    type Extra: Clone + Debug + PartialEq + Send + Sync;

    fn extra(&self, outs: &[Option<Label>], port: usize) -> Self::Extra;

    /// Verdict for the edge behind `port`, which is port-consistent.
    fn verdict(&self, outs: &[Option<Label>], port: usize, received: &Self::Extra) -> bool;

    fn random_extra(&self, rng: &mut RngStream) -> Self::Extra;
}

pub(crate) fn random_label(alphabet: usize, rng: &mut RngStream) -> Option<Label> {
    match rng.below(alphabet + 1) {
        0 => None,
        i => Some(Label(i as u16)),
    }
}
