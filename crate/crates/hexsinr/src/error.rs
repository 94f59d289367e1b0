//! Error type shared by all modules.

/// Errors raised by layout construction, link evaluation and statistics.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A parameter violates its documented precondition.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// Two points coincide where a direction or distance is required.
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    /// A query lies outside the domain of a closed-form expression.
    #[error("out of domain: {0}")]
    OutOfDomain(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
