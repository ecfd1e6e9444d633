//! Fault-free phase and detection procedures for the builtin problems,
//! their reductions, and the problem registry.

mod coloring;
mod edge_coloring;
mod incremental;
mod matching;
mod mis;
mod registry;

pub use coloring::{ColorVerdict, ColoringPhase};
pub use edge_coloring::{EdgeColorMsg, EdgeColorRegs, EdgeColoringDetect, EdgeColoringPhase};
pub use incremental::IncrementalPhase;
pub use matching::{MatchingDetect, MatchingPhase, MmMsg, MmRegs};
pub use mis::{Mark, MarkRegs, MisPhase};
pub use registry::{build, default_edge_palette, Algorithm, Inner, Problem, ProblemSpec, Shape, Visitor, PROBLEMS};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgorithmError {
    #[error("unknown problem `{0}`")]
    UnknownProblem(String),
    #[error("palette of {palette} colors is too small, need at least {needed}")]
    PaletteTooSmall { palette: usize, needed: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Transform(#[from] transformer::TransformError),
}
