use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("instance too large for exhaustive enumeration: n = {n} (max {max})")]
    TooLarge { n: usize, max: usize },

    #[error("infeasible: the minimum-cost spanning tree costs {min_cost}, budget is {c0}")]
    Infeasible { min_cost: f64, c0: f64 },

    #[error("malformed instance: {0}")]
    MalformedInstance(String),

    #[error("no prediction available for regime {0}")]
    NoPrediction(String),

    #[error("exchange walk exhausted without meeting the cost condition")]
    RepairExhausted,

    #[error("config: {0}")]
    Config(String),

    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
