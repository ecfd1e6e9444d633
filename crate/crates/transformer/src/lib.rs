//! Self-stabilizing transformers for node- and edge-LCLs built from
//! fault-free phase procedures, the line-graph and clone-graph
//! simulations, a synchronized reference executor and the eligibility
//! probe.

mod clone;
mod edge;
mod error;
mod line;
mod node;
mod phase;
mod probe;
mod reference;

pub use clone::{CloneHost, CloneState};
pub use edge::{EdgeMsg, EdgeState, EdgeTransformer};
pub use error::TransformError;
pub use line::{LineMsg, LineSim, LineState, Link, OutputMap, OwnPart, Relay, Role, VirtualMsg};
pub use node::{NodeMsg, NodeState, NodeTransformer};
pub use phase::{EdgeDetect, EdgePhase, EdgeView, NodePhase, PhaseField, WorkView};
pub use probe::{eligibility_probe, random_strong_config, ProbeReport};
pub use reference::PhaseRunner;
