use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed input: unnormalized probabilities, bad truth tables, ...
    #[error("validation error: {0}")]
    Validation(String),

    /// Arguments outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An exact enumeration would exceed the configured guard.
    #[error(
        "enumeration guard exceeded: component {component} needs {assignments} assignments \
         over {variables} variables (guard {guard})"
    )]
    GuardExceeded {
        component: usize,
        variables: usize,
        assignments: u128,
        guard: u64,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
