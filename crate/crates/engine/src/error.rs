use graph_core::GraphError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("k = {k} exceeds the {n} live nodes")]
    KTooLarge { k: usize, n: usize },
    #[error("no stabilization within {max_rounds} rounds")]
    Timeout { max_rounds: u64 },
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),
}
