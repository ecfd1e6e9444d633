//! Synchronous round executor for anonymous port-numbered networks, with an
//! oblivious adversary and stabilization detection.

mod adversary;
mod error;
mod monitor;
mod network;
mod protocol;
mod stabilize;
mod trace;

pub use adversary::{apply_to_graph, manipulated_by, random_fault_schedule, ActionKind, AdversaryAction, FaultKind};
pub use error::EngineError;
pub use monitor::{element_distances, InvariantMonitor, InvariantReport, LocalityMonitor};
pub use network::{Network, WriteViolation};
pub use protocol::{Cause, CorruptMask, Params, Protocol, RoundCtx, Write};
pub use stabilize::Stable;
pub use trace::{TraceRecord, TraceWriter};
