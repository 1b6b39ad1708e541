use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Two inputs that must describe the same object do not.
    #[error("consistency error: {0}")]
    Consistency(String),
    #[error("unknown observable label `{0}`")]
    UnknownLabel(String),
    #[error("numerical instability: {0}")]
    NumericalInstability(String),
    /// A Monte Carlo trial function failed.
    #[error("trial {trial} of block {block} failed: {message}")]
    Trial {
        block: u64,
        trial: u64,
        message: String,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
