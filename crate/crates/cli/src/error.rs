use abphase_core::PhaseError;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("config: {0}")]
    Config(String),

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Phase(#[from] PhaseError),

    #[error("{0}")]
    Acceptance(String),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// 2 for unusable input, 3 for invalid scenarios, 4 for numerical
    /// failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Parse { .. } | Self::Config(_) | Self::Usage(_) => 2,
            Self::Phase(e) if e.is_numerical() => 4,
            Self::Phase(
                PhaseError::ScenarioInvalid { .. }
                | PhaseError::Malformed(_)
                | PhaseError::Domain(_)
                | PhaseError::Singular(_),
            ) => 3,
            _ => 1,
        }
    }
}
