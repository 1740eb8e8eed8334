use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot parse {path}: {reason}")]
    Parse { path: String, reason: String },
    #[error(transparent)]
    Model(#[from] poisson_motion::Error),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse { .. } => 2,
            CliError::Model(poisson_motion::Error::InvalidParameter(_))
            | CliError::Model(poisson_motion::Error::InvalidInput(_))
            | CliError::Model(poisson_motion::Error::OutsidePhaseSpace(_)) => 2,
            CliError::Model(_) | CliError::Io { .. } => 1,
        }
    }

    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        CliError::Io { path: path.as_ref().display().to_string(), source }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
