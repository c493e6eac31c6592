use thiserror::Error;

/// Errors produced by the exact engine.
///
/// `Input` covers malformed or out-of-contract arguments (bad prime, zero
/// polynomial where a nonzero one is required, overlapping discs, ...).
/// `Degenerate` marks inputs that are structurally valid but carry no
/// information for the requested computation (constant maps, empty germs).
/// `Inconsistent` is reserved for checks that can only fail if the engine
/// itself (or the declared data it was fed) contradicts an exact identity.
#[derive(Debug, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("internal consistency violation: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
    pub fn degenerate(msg: impl Into<String>) -> Self {
        Error::Degenerate(msg.into())
    }
    pub fn inconsistent(msg: impl Into<String>) -> Self {
        Error::Inconsistent(msg.into())
    }
}
