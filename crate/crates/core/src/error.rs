use thiserror::Error;

/// Which side of an exchange step violated its precondition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::A => f.write_str("agent_a"),
            Side::B => f.write_str("agent_b"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid allocation: {0}")]
    InvalidAllocation(String),

    #[error("invalid size vector: {0}")]
    InvalidSizeVector(String),

    #[error("agent index {agent} out of range for {n} agents")]
    AgentOutOfRange { agent: usize, n: usize },

    #[error("exchange step is malformed: {0}")]
    InvalidStep(String),

    #[error("good g{good} is not held by {side} (agent {agent})")]
    GoodNotHeld {
        side: Side,
        agent: usize,
        good: usize,
    },

    #[error("invalid picking order: {0}")]
    InvalidOrder(String),

    #[error("method requires {expected}, instance is {found}")]
    WrongClass { expected: String, found: String },

    #[error("no EF1 allocation exists with the start's size vector")]
    Unreformable,

    #[error("search budget of {limit} states exceeded")]
    BudgetExceeded { limit: usize },

    #[error("instance too large for every applicable method: {0}")]
    TooLarge(String),

    #[error("allocation is not s-balanced: {0}")]
    NotSBalanced(String),

    #[error("category sizes must be divisible by n: {0}")]
    Divisibility(String),

    #[error("malformed trace: {0}")]
    MalformedTrace(String),

    #[error("malformed source problem: {0}")]
    MalformedSource(String),

    #[error("source `{source_tag}` cannot be reduced to `{target}`")]
    IncompatibleReduction { source_tag: String, target: String },
}

pub type Result<T> = std::result::Result<T, Error>;
