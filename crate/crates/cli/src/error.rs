use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad or inconsistent configuration.
    #[error("config error: {0}")]
    Config(String),
    /// Parameters outside the mathematical domain of an operation. Library errors keep
    /// their own category label; see [`CliError::domain`].
    #[error("{0}")]
    Domain(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn domain(msg: impl std::fmt::Display) -> Self {
        CliError::Domain(format!("domain error: {msg}"))
    }

    pub fn io(e: impl std::fmt::Display) -> Self {
        CliError::Io(e.to_string())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<cmur_core::Error> for CliError {
    fn from(e: cmur_core::Error) -> Self {
        CliError::Domain(e.to_string())
    }
}
