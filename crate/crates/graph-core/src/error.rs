use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("node {node} would have degree {degree}, above the bound {delta}")]
    DegreeBoundViolated { node: usize, degree: usize, delta: usize },
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("self-loop at node {0}")]
    SelfLoop(usize),
    #[error("no node {0}")]
    UnknownNode(usize),
    #[error("no edge {{{0}, {1}}}")]
    UnknownEdge(usize, usize),
    #[error("degree bound must be positive")]
    ZeroDegreeBound,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Io(String),
}
