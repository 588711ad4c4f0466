use thiserror::Error;

/// Command failure, classified by exit code.
#[derive(Error, Debug)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("data error: {0}")]
    Data(neofuzzy::Error),

    #[error("io error: {context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Data(_) => 3,
            CliError::Io { .. } => 4,
        }
    }

    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io { context: context.into(), source }
    }

    /// Wraps an engine error, routing I/O failures to the io class.
    pub(crate) fn from_engine(context: impl std::fmt::Display, err: neofuzzy::Error) -> Self {
        match err {
            neofuzzy::Error::Io(source) => CliError::io(context.to_string(), source),
            other => CliError::Data(other),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
