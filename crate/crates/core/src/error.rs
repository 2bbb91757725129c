use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the numerical routines.
///
/// Every variant carries the `module::operation` identifier of the routine
/// that raised it, so front ends can report where a failure originated.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the operation's domain.
    #[error("{op}: {message}")]
    Domain { op: &'static str, message: String },

    /// A quadrature did not reach its tolerance, or the integral diverges.
    #[error("{op}: quadrature failed: {message}")]
    Quadrature { op: &'static str, message: String },

    /// A linear system had no usable pivot.
    #[error("{op}: singular linear system: {message}")]
    Singular { op: &'static str, message: String },

    /// Malformed structured input (tables, records, configs).
    #[error("{op}: invalid input: {message}")]
    Input { op: &'static str, message: String },
}

impl Error {
    pub(crate) fn domain(op: &'static str, message: impl Into<String>) -> Self {
        Error::Domain {
            op,
            message: message.into(),
        }
    }

    pub(crate) fn quadrature(op: &'static str, message: impl Into<String>) -> Self {
        Error::Quadrature {
            op,
            message: message.into(),
        }
    }

    pub(crate) fn input(op: &'static str, message: impl Into<String>) -> Self {
        Error::Input {
            op,
            message: message.into(),
        }
    }

    /// Stable machine-readable code for this error class.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Domain { .. } => "domain_error",
            Error::Quadrature { .. } => "quadrature_error",
            Error::Singular { .. } => "singular_system",
            Error::Input { .. } => "invalid_input",
        }
    }

    /// The `module::operation` that raised the error.
    /// The detail text without the operation prefix.
    pub fn message(&self) -> &str {
        match self {
            Error::Domain { message, .. }
            | Error::Quadrature { message, .. }
            | Error::Singular { message, .. }
            | Error::Input { message, .. } => message,
        }
    }

    pub fn op(&self) -> &'static str {
        match self {
            Error::Domain { op, .. }
            | Error::Quadrature { op, .. }
            | Error::Singular { op, .. }
            | Error::Input { op, .. } => op,
        }
    }
}
