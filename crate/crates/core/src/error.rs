use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter lies outside its admissible range.
    #[error("domain error: {0}")]
    Domain(String),

    /// Array or subsystem shapes do not fit together.
    #[error("shape error: {0}")]
    Shape(String),

    /// The operation is only defined for particular subsystem dimensions.
    #[error("unsupported dimension: {0}")]
    UnsupportedDimension(String),

    /// A matrix failed a density-matrix or measurement validity check.
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn shape<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Shape(msg.into()))
}
