use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),

    #[error("function depends on {support} variables, cap is {cap}")]
    SupportTooLarge { support: usize, cap: usize },

    #[error("{what} needs {n} variables, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        n: usize,
        cap: usize,
    },

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("invalid subspace pattern `{0}`")]
    InvalidPattern(String),

    #[error("subspace has {got} positions, network has {expected} variables")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("state set is empty")]
    EmptyStateSet,

    #[error("unknown arc id {0}")]
    UnknownArc(usize),

    #[error("arc set is inconsistent (variable {0} is induced at both values)")]
    Inconsistent(usize),

    #[error("subspace {0} is not a trap space")]
    NotATrapSpace(String),

    #[error("reduction by {0} fixes every variable")]
    EmptyReduction(String),

    #[error("solver timed out after {solutions} solutions")]
    Timeout { solutions: usize },

    #[error("invalid generator configuration: {0}")]
    InvalidConfig(String),

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
