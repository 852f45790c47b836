use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// A malformed operator, permutation or table.
    #[error("validation error: {0}")]
    Validation(String),
    /// A size or level limit would be exceeded.
    #[error("resource limit: {0}")]
    Resource(String),
    /// The state does not satisfy an operation's precondition.
    #[error("contract violation: {0}")]
    Contract(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
