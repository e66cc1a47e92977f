use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid input: {0}")]
    Validation(String),

    /// Parameters under which propagation or the Katz series does not converge.
    #[error("divergent parameters: {0}")]
    Divergence(String),

    /// An exhaustive routine was asked to enumerate more than its guard allows.
    #[error("instance too large: {what} = {size} exceeds guard {limit}")]
    Size {
        what: &'static str,
        size: u128,
        limit: u128,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}
