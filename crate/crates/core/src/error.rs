use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("structural error: {0}")]
    Structural(String),
    #[error("catalog error: {0}")]
    Catalog(String),
    #[error("representation error: {0}")]
    Representation(String),
    #[error("malformed pattern: {0}")]
    Pattern(String),
    #[error("missing differential rule for {0}")]
    RuleCoverage(String),
    #[error("generator {0} is not in any partition class")]
    Partition(String),
    #[error("refused: {0}")]
    Refused(String),
    #[error("cyclic on-shell rule set through {0}")]
    CyclicRules(String),
}

pub type Result<T> = std::result::Result<T, Error>;
