use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("graph has treewidth greater than 2")]
    NotTw2,
    #[error("treewidth exceeds 2 after the wedge transform")]
    NotTw2AfterTransform,
    #[error("not an l-lemon: {0}")]
    NotALemon(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("outside the dichotomy: {0}")]
    OutOfDichotomy(String),
    #[error("method not applicable: {0}")]
    NotApplicable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
