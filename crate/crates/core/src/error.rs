use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Bad input: parameters, labels, config values.
    #[error("validation error: {0}")]
    Validation(String),

    /// A Bogoliubov stage (or a dispersion radicand) is outside its domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The truncated Fock space cannot hold the state within tolerance.
    #[error("cutoff error: {0}")]
    Cutoff(String),

    #[error("config parse error: {0}")]
    Config(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors caused by user input rather than by the program or the
    /// environment.
    pub fn is_user_error(&self) -> bool {
        matches!(self, Error::Validation(_) | Error::Config(_))
    }
}
