use thiserror::Error;

/// Everything that can go wrong inside the library.
///
/// The variants map one-to-one onto the `status` values emitted by the CLI,
/// so callers can tell bad input apart from a blown resource cap.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("resource limit exceeded: {what} is {actual}, cap is {cap}")]
    ResourceLimit {
        what: &'static str,
        actual: usize,
        cap: usize,
    },

    /// Homology of the empty space was requested.
    #[error("the space is empty")]
    EmptySpace,

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error("spectral pages are only computed over a field, not over the integers")]
    UnsupportedCoefficients,

    #[error("infeasible generator parameters: {0}")]
    Infeasible(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn malformed(msg: impl Into<String>) -> Error {
    Error::Malformed(msg.into())
}

pub(crate) fn check_cap(what: &'static str, actual: usize, cap: usize) -> Result<()> {
    if actual > cap {
        Err(Error::ResourceLimit { what, actual, cap })
    } else {
        Ok(())
    }
}
