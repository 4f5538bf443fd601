use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("declaration of {pred}: {msg}")]
    Declaration { pred: String, msg: String },

    #[error("{undefined} undefined atoms exceed the enumeration budget of {budget}")]
    BudgetExceeded { undefined: usize, budget: usize },

    #[error("program has more than {limit} ground atoms")]
    UniverseTooLarge { limit: usize },

    #[error("oracle scale exceeded: {atoms} atoms, limit {limit}")]
    OracleScale { atoms: usize, limit: usize },

    #[error("{0}")]
    Io(String),

    #[error("corpus: {0}")]
    Corpus(String),

    /// A literal and its complement were both derived. The semantics rules
    /// this out, so seeing it means an engine bug.
    #[error("inconsistent interpretation: both {0} and its negation derived")]
    Inconsistent(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
