use thiserror::Error;

/// Errors raised by state construction, circuit validation and measurement.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The state has zero norm, typically because every term cancelled.
    #[error("degenerate state: {0}")]
    DegenerateState(String),

    /// Part of the state lives on spatial modes that no detector watches.
    #[error("detector coverage: {0}")]
    Coverage(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
