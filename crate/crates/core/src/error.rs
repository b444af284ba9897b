use thiserror::Error;

/// Crate-wide error type. The three variants correspond to the exit codes of
/// the command line tool: descriptor/validation problems exit with 2, domain
/// errors (well-formed input outside an operation's domain) with 3.
#[derive(Debug, Error)]
pub enum Error {
    /// Input data fails a structural invariant.
    #[error("descriptor error: {0}")]
    Descriptor(String),
    /// Well-formed values fed to an operation whose preconditions they miss
    /// (shape mismatches, incomposable morphisms, points outside a domain).
    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub fn descriptor_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Descriptor(msg.into()))
}

pub fn domain_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
