use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),
    #[error("elements belong to different groups")]
    GroupMismatch,
    #[error("operation requires a nontrivial character")]
    TrivialCharacter,
    #[error("invalid configuration: {}", .0.join("; "))]
    InvalidConfiguration(Vec<String>),
    #[error("unknown configuration `{0}`")]
    UnknownConfiguration(String),
    #[error("invalid cover: {0}")]
    InvalidCover(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
