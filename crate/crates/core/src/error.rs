use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} = {value} is out of range: {reason}")]
    OutOfRange { what: &'static str, value: f64, reason: &'static str },

    #[error("{what}: {reason}")]
    Domain { what: &'static str, reason: String },

    #[error("{what} did not converge: {detail}")]
    NoConvergence { what: &'static str, detail: String },

    #[error("invalid configuration field `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("no barrier: {0}")]
    NoBarrier(String),

    #[error("degenerate channels (Lambda = 0) at xi = {xi}")]
    Degenerate { xi: f64 },

    #[error("{what}: non-finite state after step {last_valid}")]
    NonFinite { what: &'static str, last_valid: usize },

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config { field: field.into(), message: message.into() }
    }

    /// True for errors caused by the user's input rather than by the numerics.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config { .. })
    }
}
