use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LclError {
    #[error("element {0} is undecided; contentness is only defined for decided elements")]
    UndecidedElement(usize),
    #[error("potential of kind {spec:?} applied to a configuration of kind {config:?}")]
    KindMismatch { spec: graph_core::Kind, config: graph_core::Kind },
    #[error("unknown problem {0:?}")]
    UnknownProblem(String),
    #[error("supportive digraph has a cycle through {0}")]
    Cyclic(u16),
}
