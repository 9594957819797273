use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument is outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// An exhaustive search would exceed its configured cap or budget.
    #[error("capacity error: {0}")]
    Capacity(String),

    #[error("unknown group {name:?}; available: {}", available.join(", "))]
    Lookup { name: String, available: Vec<String> },

    /// Shape expression syntax error; `position` is a character offset.
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    /// Catalog data rejected at load time.
    #[error("catalog line {line}: {message}")]
    Catalog { line: usize, message: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }
}
