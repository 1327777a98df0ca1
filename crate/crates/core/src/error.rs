use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("{what} = {value} exceeds the oracle cap of {cap}")]
    Capacity {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("unsupported mode: {0}")]
    UnsupportedMode(String),

    /// An online algorithm made an illegal move (infeasible bin, monochromatic edge).
    #[error("validity violation: {0}")]
    Validity(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A construction broke one of its own guarantees. Always a bug.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn malformed(msg: impl Into<String>) -> Self {
        Error::Malformed(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
