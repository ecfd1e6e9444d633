use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error("invalid phase structure: {0}")]
    InvalidPhaseStructure(String),
}
