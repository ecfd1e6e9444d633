use std::collections::HashMap;
use std::fmt::Debug;

use graph_core::{Graph, Kind, Label};
use lcl_core::{LclSpec, PotentialSpec};
use pps::{RngStream, Step, StreamKey, Tag};
use serde::{Deserialize, Serialize};

/// Which registers an adversarial corruption overwrites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CorruptMask {
    pub out: bool,
    pub step: bool,
    pub wait: bool,
    pub phase: bool,
    pub inbox: bool,
}

impl CorruptMask {
    pub const ALL: CorruptMask = CorruptMask { out: true, step: true, wait: true, phase: true, inbox: true };
    pub const OUT: CorruptMask = CorruptMask { out: true, step: false, wait: false, phase: false, inbox: false };
}

/// Constants of a transformed algorithm that the engine and harness need.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Params {
    /// Influence number of the simulated LCL.
    pub nu: usize,
    /// Rounds in one phase as seen on the host graph.
    pub phi: usize,
    /// Elements at least this far from every manipulated node keep their
    /// output.
    pub locality_radius: usize,
    /// Every decided element is content from `t*_b + strong_offset` on.
    pub strong_offset: usize,
}

impl Params {
    pub fn confirm_window(&self) -> usize {
        2 * self.phi + 2
    }
}

/// Why an output register changed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Cause {
    Decision,
    Reset,
}

/// Self-reported register write, checked by the engine against the actual
/// register diff.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Write {
    pub reg: usize,
    pub cause: Cause,
    /// Step the writer was at when it wrote.
    pub step: Step,
    /// Phase length that step refers to.
    pub phi: u16,
}

type Bank = Vec<(StreamKey, Tag, RngStream)>;

fn fetch<'b>(bank: &'b mut Bank, master: u64, key: StreamKey, tag: Tag) -> &'b mut RngStream {
    let i = match bank.iter().position(|(k, t, _)| *k == key && *t == tag) {
        Some(i) => i,
        None => {
            bank.push((key, tag, RngStream::derive(master, key, tag)));
            bank.len() - 1
        }
    };
    &mut bank[i].2
}

/// Everything a node may see besides its registers and inbox during one
/// round: its degree, Δ, random streams and the write log.
pub struct RoundCtx<'a> {
    pub(crate) degree: usize,
    pub(crate) delta: usize,
    pub(crate) master: u64,
    pub(crate) key: StreamKey,
    pub(crate) me: usize,
    pub(crate) neighbors: &'a [usize],
    pub(crate) bank: &'a mut Bank,
    pub(crate) shared: &'a mut HashMap<(StreamKey, Tag), RngStream>,
    pub(crate) forced: bool,
    pub(crate) log: &'a mut Vec<Write>,
    pub(crate) reg_offset: usize,
}

impl<'a> RoundCtx<'a> {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    /// Test mode in which every ℏ exits at once and symmetric choices are
    /// resolved by [`RoundCtx::is_lower_end`].
    pub fn forced_sync(&self) -> bool {
        self.forced
    }

    /// The node's own stream for `tag`.
    pub fn rng(&mut self, tag: Tag) -> &mut RngStream {
        fetch(self.bank, self.master, self.key, tag)
    }

    /// Stream of the edge behind `port`, in layer `layer`. Both endpoints
    /// reach the same stream; only one of them should draw from it in a
    /// given round.
    pub fn edge_rng(&mut self, port: usize, layer: usize, tag: Tag) -> &mut RngStream {
        let key = StreamKey::edge_clone(self.me, self.neighbors[port], layer);
        let master = self.master;
        self.shared.entry((key, tag)).or_insert_with(|| RngStream::derive(master, key, tag))
    }

    /// Whether this node is the canonical endpoint of the edge behind
    /// `port`. Only available in forced-sync mode.
    pub fn is_lower_end(&self, port: usize) -> bool {
        assert!(self.forced, "orientation is only exposed in forced-sync mode");
        self.me < self.neighbors[port]
    }

    pub fn log(&mut self, reg: usize, cause: Cause, step: Step, phi: u16) {
        self.log.push(Write { reg: reg + self.reg_offset, cause, step, phi });
    }

    /// Context for the `index`-th virtual node hosted here, with `degree`
    /// virtual ports and its registers numbered from `reg_offset`.
    pub fn sub(&mut self, index: usize, degree: usize, delta: usize, reg_offset: usize) -> RoundCtx<'_> {
        RoundCtx {
            degree,
            delta,
            master: self.master,
            key: StreamKey::Clone(self.me, index),
            me: self.me,
            neighbors: self.neighbors,
            bank: self.bank,
            shared: self.shared,
            forced: self.forced,
            log: self.log,
            reg_offset: self.reg_offset + reg_offset,
        }
    }
}

/// A per-node program run by the engine in synchronous rounds. Nodes are
/// anonymous: the program sees ports, its degree and Δ only.
pub trait Protocol: Send + Sync {
    type State: Clone + Debug + Send + Sync;
    type Msg: Clone + Debug + Send + Sync;

    fn name(&self) -> &str;

    /// Kind of the host-level output.
    fn kind(&self) -> Kind;

    /// Host-level LCL used for legality.
    fn lcl(&self) -> &LclSpec;

    fn params(&self) -> Params;

    fn initial_state(&self, degree: usize) -> Self::State;

    /// Message on a freshly created link.
    fn idle_message(&self) -> Self::Msg;

    fn random_message(&self, delta: usize, rng: &mut RngStream) -> Self::Msg;

    /// One round of local computation: read `inbox`, update `state`, fill
    /// `outbox` (one slot per port).
    fn step(&self, ctx: &mut RoundCtx<'_>, state: &mut Self::State, inbox: &[Self::Msg], outbox: &mut [Self::Msg]);

    /// Overwrites the registers selected by `mask` with uniform values from
    /// their domains.
    fn corrupt(&self, state: &mut Self::State, mask: CorruptMask, degree: usize, delta: usize, rng: &mut RngStream);

    /// Adapts per-port registers after a topology change: new port `p`
    /// inherits old port `map[p]`, or starts fresh when `None`.
    fn reshape(&self, state: &mut Self::State, map: &[Option<usize>]);

    /// All output registers, in a fixed order matching [`Write::reg`].
    fn out_registers(&self, state: &Self::State, out: &mut Vec<Option<Label>>);

    /// Host output of a node (node kind).
    fn node_output(&self, state: &Self::State) -> Option<Label>;

    /// Output register behind `port` (edge kind).
    fn port_output(&self, state: &Self::State, port: usize) -> Option<Label>;

    /// Graph of the simulated virtual level, if the protocol simulates one
    /// (clone graphs, line graphs). Recomputed on topology changes only.
    fn view_graph(&self, _host: &Graph) -> Option<Graph> {
        None
    }

    /// Node configuration of the virtual level on `view`.
    fn view_config(&self, _host: &Graph, _view: &Graph, _states: &[Self::State]) -> Option<graph_core::Configuration> {
        None
    }

    /// LCL of the virtual level (the host LCL when there is none).
    fn view_lcl(&self) -> &LclSpec {
        self.lcl()
    }

    /// Potential on the monitored level.
    fn potential(&self) -> PotentialSpec;
}
